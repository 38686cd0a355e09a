#include <csignal>
#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "crossdrop/core/error.hpp"
#include "crossdrop/hub/config.hpp"
#include "crossdrop/hub/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Authoritative hub for cross-display content transfer"};
  app.require_subcommand(1);
  auto* serve = app.add_subcommand("serve", "Serve operator and display clients over TCP/WebSocket");
  std::string config_path;
  int port = -1;
  bool virtual_clock = false;
  std::string bind = "0.0.0.0";
  serve->add_option("--config", config_path, "Hub config file")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Override the configured port (0 = ephemeral)")->check(CLI::Range(0, 65535));
  serve->add_flag("--virtual-clock", virtual_clock, "Advance hub time by exactly 1/tick_hz per tick");
  serve->add_option("--bind", bind, "Listen address");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = crossdrop::hub::load_hub_config(config_path);
    crossdrop::hub::ServerOptions options;
    options.bind_address = bind;
    options.port = port >= 0 ? static_cast<std::uint16_t>(port) : config.port;
    options.tick_hz = config.tick_hz;
    options.virtual_clock = virtual_clock;

    // Block before any thread starts so only sigwait sees them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    crossdrop::hub::HubServer server(
        crossdrop::hub::Hub(crossdrop::hub::make_context(config), crossdrop::hub::make_initial_state(config),
                            config.session_timeout),
        options);
    const auto bound = server.start();
    std::printf("listening on %s:%u\n", bind.c_str(), static_cast<unsigned>(bound));
    std::fflush(stdout);

    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    return 0;
  } catch (const crossdrop::Error& e) {
    std::fprintf(stderr, "hub: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hub: %s\n", e.what());
  }
  return 1;
}
