#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crossdrop/core/lifecycle.hpp"
#include "crossdrop/core/math.hpp"
#include "crossdrop/core/model.hpp"
#include "crossdrop/core/world.hpp"

namespace crossdrop {

using nlohmann::json;

void to_json(json& j, const Vec3& v);
void from_json(const json& j, Vec3& v);
void to_json(json& j, const UnitQuat& q);
void from_json(const json& j, UnitQuat& q);
void to_json(json& j, const Pose& p);
void from_json(const json& j, Pose& p);
void to_json(json& j, const Aabb& b);
void from_json(const json& j, Aabb& b);
void to_json(json& j, const Appearance& a);
void from_json(const json& j, Appearance& a);
void to_json(json& j, const Component& c);
void from_json(const json& j, Component& c);
void to_json(json& j, const ContentItem& item);
void from_json(const json& j, ContentItem& item);
void to_json(json& j, const DisplayProfile& d);
void from_json(const json& j, DisplayProfile& d);
void to_json(json& j, const PlacementState& s);
void from_json(const json& j, PlacementState& s);
void to_json(json& j, const WorldState& w);
void from_json(const json& j, WorldState& w);

// Reads a whole file; throws Error{kConfigurationError} when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// Content library: one JSON object per line (blank lines ignored).
// Errors are Error{kConfigurationError} prefixed with "<source>:<line>".
std::vector<ContentItem> parse_content_library(std::string_view text, std::string_view source = "<memory>");
std::vector<ContentItem> load_content_library(const std::filesystem::path& path);

// j.at(key) as a non-negative integer; Error{kInvalidArgument} otherwise.
std::uint64_t get_unsigned(const json& j, std::string_view key);

// 1-based line number of a byte offset into `text`.
std::size_t line_of_offset(std::string_view text, std::size_t offset);

}  // namespace crossdrop
