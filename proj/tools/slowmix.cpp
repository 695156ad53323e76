#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crn/cli.hpp"

namespace {

crn::State parse_state(const std::string& text) {
  crn::State s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    s.push_back(std::stoll(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slowmix: structural and numerical certificates of slow "
               "(non-exponential) mixing for stochastic reaction networks"};
  app.require_subcommand(1);

  crn::cli::RunConfig config;
  std::vector<std::string> from_args;
  std::string box_arg;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("input", config.input, "reaction network file (.crn)")
        ->required();
    cmd->add_option("--from", from_args,
                    "initial state as comma-separated counts (repeatable)");
    cmd->add_option("--box", box_arg, "state box bound(s), e.g. 30 or 30,40");
    cmd->add_option("--rho", config.rho, "exponential-moment parameter");
    cmd->add_option("--umax", config.u_max, "growth exponent bound");
    cmd->add_option("--cyclemax", config.max_len, "max cycle length");
    cmd->add_option("--nmax", config.n_max, "sequence scan bound");
    cmd->add_option("--tmax", config.t_max, "time horizon");
    cmd->add_option("--grid", config.grid, "time grid step");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--format", config.format, "output format (json|csv)");
  };

  for (const char* name : {"validate", "analyze", "certify", "simulate",
                           "tvnorm", "congestion"})
    add_common(app.add_subcommand(name));

  CLI11_PARSE(app, argc, argv);
  config.command = app.get_subcommands().front()->get_name();
  try {
    for (const auto& f : from_args)
      config.initials.push_back(parse_state(f));
    if (!box_arg.empty()) {
      for (auto v : parse_state(box_arg)) config.box.push_back(v);
    }
  } catch (const std::exception& e) {
    std::cerr << "{\"code\": \"parameter\", \"message\": \"bad numeric "
                 "argument\"}\n";
    return crn::cli::kInputError;
  }
  return crn::cli::run(config, std::cout, std::cerr);
}
