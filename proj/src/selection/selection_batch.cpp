#include <cstddef>

#include "crossdrop/selection/selection.hpp"

namespace crossdrop::selection {

//------------------------------------------------------------------ serial

std::vector<std::optional<DisplayHit>> select_displays_by_palm_batch_serial(std::span<const Ray> rays,
                                                                            std::span<const DisplayProfile> displays,
                                                                            const SelectionConfig& cfg) {
  std::vector<std::optional<DisplayHit>> out;
  out.reserve(rays.size());
  for (const auto& ray : rays) {
    out.push_back(select_display_by_palm(ray, displays, cfg));
  }
  return out;
}

std::vector<std::optional<ContentId>> select_contents_by_gaze_batch_serial(std::span<const Ray> gazes,
                                                                           std::span<const GazeCandidate> candidates,
                                                                           const SelectionConfig& cfg) {
  std::vector<std::optional<ContentId>> out;
  out.reserve(gazes.size());
  for (const auto& gaze : gazes) {
    out.push_back(select_content_by_gaze(gaze, candidates, cfg));
  }
  return out;
}

//---------------------------------------------------------------- parallel

std::vector<std::optional<DisplayHit>> select_displays_by_palm_batch(std::span<const Ray> rays,
                                                                     std::span<const DisplayProfile> displays,
                                                                     const SelectionConfig& cfg) {
  std::vector<std::optional<DisplayHit>> out(rays.size());
  const auto n = static_cast<std::ptrdiff_t>(rays.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = select_display_by_palm(rays[static_cast<std::size_t>(i)], displays, cfg);
  }
  return out;
}

std::vector<std::optional<ContentId>> select_contents_by_gaze_batch(std::span<const Ray> gazes,
                                                                    std::span<const GazeCandidate> candidates,
                                                                    const SelectionConfig& cfg) {
  std::vector<std::optional<ContentId>> out(gazes.size());
  const auto n = static_cast<std::ptrdiff_t>(gazes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = select_content_by_gaze(gazes[static_cast<std::size_t>(i)], candidates, cfg);
  }
  return out;
}

}  // namespace crossdrop::selection
