#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crn/certify.hpp"
#include "crn/diagnostics.hpp"
#include "crn/forward.hpp"
#include "crn/json_io.hpp"
#include "crn/parser.hpp"
#include "crn/ssa.hpp"

namespace crn::cli {

// Exit codes: 0 success, 1 analysis negative, 2 input error.
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string command;  // validate | analyze | certify | simulate | tvnorm | congestion
  std::string input;
  std::vector<State> initials;            // --from, repeatable
  std::vector<std::int64_t> box;          // --box
  std::optional<double> rho;              // --rho
  std::int64_t u_max = 4;                 // --umax
  std::size_t max_len = 6;                // --cyclemax
  std::int64_t n_max = 100000;            // --nmax
  double t_max = 10.0;                    // --tmax
  double grid = 1.0;                      // --grid
  std::uint64_t seed = 0;                 // --seed
  std::string format = "json";            // --format
};

namespace detail {

inline std::string output_path(const std::string& input,
                               const std::string& suffix) {
  std::string base = input;
  auto dot = base.rfind(".crn");
  if (dot != std::string::npos && dot == base.size() - 4)
    base = base.substr(0, dot);
  return base + suffix;
}

inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline ReactionSystem load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open input file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ReactionSystem sys = parse_network(ss.str());
  auto report = validate_network(sys);
  if (!report.ok())
    throw Error("invalid-network",
                "network violates type invariants: " +
                    report.findings.front().message);
  return sys;
}

inline Box make_box(const RunConfig& config, std::size_t d,
                    std::int64_t fallback) {
  Box box;
  if (config.box.empty()) {
    box.bounds.assign(d, fallback);
  } else if (config.box.size() == 1) {
    box.bounds.assign(d, config.box[0]);
  } else if (config.box.size() == d) {
    box.bounds = config.box;
  } else {
    throw Error("parameter", "--box needs 1 or species-count bounds");
  }
  return box;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write output file: " + path);
  out << content;
}

inline DistributionVector stationary_on_box(const ReactionSystem& sys,
                                            const TransitionKernel& kernel,
                                            const Box& box, const State& x0,
                                            double t_long) {
  if (auto cb = solve_complex_balance(sys))
    return product_poisson(cb->concentrations, box);
  // No product form available: long-time forward solve, flagged
  // approximate by the leaked mass it carries.
  return forward_distribution(kernel, x0, t_long, box);
}

}  // namespace detail

inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "validate") {
      std::ifstream in(config.input, std::ios::binary);
      if (!in) throw Error("io", "cannot open input file: " + config.input);
      std::stringstream ss;
      ss << in.rdbuf();
      ReactionSystem sys = parse_network(ss.str());
      auto report = validate_network(sys);
      out << to_json(report).dump(2) << "\n";
      return report.ok() ? kOk : kNegative;
    }

    ReactionSystem sys = detail::load(config.input);
    const std::size_t d = sys.dim();
    for (const auto& x : config.initials) {
      if (x.size() != d)
        throw Error("parameter", "--from dimension does not match species count");
      for (auto v : x)
        if (v < 0) throw Error("parameter", "--from counts must be >= 0");
    }
    for (auto v : config.box)
      if (v <= 0) throw Error("parameter", "--box bounds must be positive");

    if (config.command == "analyze") {
      out << analysis_to_json(sys).dump(2) << "\n";
      return kOk;
    }

    if (config.command == "certify") {
      CertifyOptions opt;
      opt.rho = config.rho;
      opt.u_max = config.u_max;
      opt.max_len = config.max_len;
      opt.n_max = config.n_max;
      std::optional<State> x0;
      if (!config.initials.empty()) x0 = config.initials.front();
      CertifyResult res = certify_non_exponential(sys, x0, opt);
      if (!res.certificate) {
        out << json{{"certificate", nullptr}, {"reason", res.reason}}.dump(2)
            << "\n";
        return kNegative;
      }
      json doc = to_json(sys, *res.certificate);
      std::string text = doc.dump(2) + "\n";
      detail::write_file(detail::output_path(config.input, ".cert.json"), text);
      out << text;
      return kOk;
    }

    if (config.command == "simulate") {
      State x0 = config.initials.empty() ? State(d, 0)
                                         : config.initials.front();
      TransitionKernel kernel(sys);
      Trajectory traj = simulate_ssa(kernel, x0, config.t_max, config.seed);
      std::string csv = "t";
      for (const auto& s : sys.species) csv += "," + s;
      csv += "\n";
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv += detail::format_double(traj.times[i]);
        for (auto v : traj.states[i]) csv += "," + std::to_string(v);
        csv += "\n";
      }
      detail::write_file(detail::output_path(config.input, ".traj.csv"), csv);
      if (config.format == "csv")
        out << csv;
      else
        out << json{{"jumps", traj.times.size() - 1},
                    {"t_end", config.t_max},
                    {"final_state", traj.states.back()}}
                   .dump(2)
            << "\n";
      return kOk;
    }

    if (config.command == "tvnorm") {
      if (config.initials.empty())
        throw Error("parameter", "tvnorm requires at least one --from");
      TransitionKernel kernel(sys);
      Box box = detail::make_box(config, d, 30);
      std::vector<double> grid;
      for (double t = config.grid; t <= config.t_max + 1e-9; t += config.grid)
        grid.push_back(t);
      DistributionVector target = detail::stationary_on_box(
          sys, kernel, box, config.initials.front(), config.t_max);
      auto curves =
          tv_decay_report(sys, config.initials, box, grid, target);
      std::string csv;
      json slopes = json::array();
      for (const auto& curve : curves) {
        csv += "# initial:";
        for (auto v : curve.initial) csv += " " + std::to_string(v);
        csv += "\nt,tv_lower,tv_upper\n";
        for (std::size_t i = 0; i < curve.times.size(); ++i)
          csv += detail::format_double(curve.times[i]) + "," +
                 detail::format_double(curve.tv[i].lower) + "," +
                 detail::format_double(curve.tv[i].upper) + "\n";
        slopes.push_back(json{{"initial", curve.initial},
                              {"log_slope", curve.log_slope},
                              {"window_points", curve.window_points}});
      }
      detail::write_file(detail::output_path(config.input, ".tv.csv"), csv);
      if (config.format == "csv")
        out << csv;
      else
        out << json{{"curves", slopes}}.dump(2) << "\n";
      return kOk;
    }

    if (config.command == "congestion") {
      TransitionKernel kernel(sys, CachePolicy::memoize);
      Box box = detail::make_box(config, d, 20);
      State x0 = config.initials.empty() ? State(d, 0)
                                         : config.initials.front();
      DistributionVector pi =
          detail::stationary_on_box(sys, kernel, box, x0, config.t_max);
      CongestionReport report = congestion_ratio(kernel, pi, box);
      json doc = to_json(report);
      std::string text = doc.dump(2) + "\n";
      detail::write_file(detail::output_path(config.input, ".congestion.json"),
                         text);
      out << text;
      return kOk;
    }

    throw Error("parameter", "unknown command: " + config.command);
  } catch (const Error& e) {
    err << error_to_json(e).dump(2) << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << json{{"code", "internal"}, {"message", e.what()}}.dump(2) << "\n";
    return kInputError;
  }
}

}  // namespace crn::cli
