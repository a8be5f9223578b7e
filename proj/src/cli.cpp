#include "graphon/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "graphon/core.hpp"
#include "graphon/coupling.hpp"
#include "graphon/errors.hpp"
#include "graphon/json_io.hpp"
#include "graphon/measures.hpp"
#include "graphon/metrics.hpp"
#include "graphon/multiway.hpp"
#include "graphon/named.hpp"
#include "graphon/order.hpp"
#include "graphon/reproduce.hpp"

namespace graphon {

namespace {

using io::Json;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Session {
 public:
  Session(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  bool json = false;
  std::string out_path;

  Json read(const std::string& path) {
    std::stringstream text;
    if (path == "-") {
      text << in_.rdbuf();
    } else {
      std::ifstream file(path);
      if (!file) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
      text << file.rdbuf();
    }
    return io::parse(text.str());
  }

  void emit(const Json& j, const std::string& human) {
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw Error(ErrorKind::ParseError, "cannot write '" + out_path + "'");
      file << j.dump(2) << '\n';
    }
    if (json) {
      out_ << j.dump(2) << '\n';
    } else {
      out_ << human;
      if (!human.empty() && human.back() != '\n') out_ << '\n';
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
};

std::string describe(const StepGraphon& w) {
  return "step graphon with " + std::to_string(w.blocks()) + " blocks, edge density " + num(edge_density(w));
}

Json report_json(const ScenarioReport& r) {
  Json checks = Json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", c.measured},
                      {"expected", c.expected},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"note", c.note}});
  }
  return {{"which", r.which}, {"passed", r.passed()}, {"lines", r.lines}, {"checks", checks}};
}

std::string report_text(const ScenarioReport& r) {
  std::string s = "scenario " + r.which + "\n";
  for (const auto& line : r.lines) s += "  " + line + "\n";
  for (const Check& c : r.checks) {
    s += std::string(c.passed ? "  ok   " : "  FAIL ") + c.name + ": measured " + num(c.measured) + ", expected " +
         num(c.expected) + " (tolerance " + num(c.tolerance) + ")";
    if (!c.note.empty()) s += ", " + c.note;
    s += "\n";
  }
  s += r.passed() ? "all checks passed\n" : "some checks failed\n";
  return s;
}

std::function<double(double)> named_function(const std::string& f) {
  if (f == "x2") return [](double x) { return x * x; };
  if (f == "abs") return [](double x) { return std::abs(x - 0.5); };
  if (f == "exp") return [](double x) { return std::exp(x); };
  throw Error(ErrorKind::InvalidArgument, "unknown function '" + f + "'");
}

int exit_for(ErrorKind kind) {
  return kind == ErrorKind::SolverFailure || kind == ErrorKind::ScalingDiverged ? kExitSolver : kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Session session(in, out);
  int code = kExitOk;
  std::function<void()> action;

  CLI::App app{"Step graphon calculus", "graphon_cli"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", session.json, "Print machine-readable JSON");
  app.add_option("--out", session.out_path, "Also write the JSON result to this file");

  std::string u_path, w_path, y_path, coupling_path, budget_path;
  std::uint64_t seed = 0;

  // build
  std::string name;
  double c_param = 0.5;
  std::optional<double> eps;
  auto* build = app.add_subcommand("build", "Build a named graphon");
  build->add_option("--name", name, "constant, bipartite, w1, w2, u1 or u2")->required();
  build->add_option("--c", c_param, "Value of the constant graphon");
  build->add_option("--eps", eps, "Family parameter 2^-k, 3 <= k <= 10");
  build->callback([&] {
    action = [&] {
      const StepGraphon w = build_named_graphon(name, c_param, eps.value_or(0.125));
      session.emit(io::to_json(w), describe(w));
    };
  });

  // density
  auto* density = app.add_subcommand("density", "Edge density");
  density->add_option("--w", w_path, "Graphon file")->required();
  density->callback([&] {
    action = [&] {
      const double d = edge_density(io::graphon_from_json(session.read(w_path)));
      session.emit(Json{{"density", d}}, "edge density " + num(d));
    };
  });

  // intf
  std::string f_name;
  auto* intf = app.add_subcommand("intf", "Integral of f(W)");
  intf->add_option("--w", w_path, "Graphon file")->required();
  intf->add_option("--f", f_name, "x2, abs (|x-1/2|) or exp")->required()->check(CLI::IsMember({"x2", "abs", "exp"}));
  intf->callback([&] {
    action = [&] {
      const double v = int_f(io::graphon_from_json(session.read(w_path)), named_function(f_name));
      session.emit(Json{{"f", f_name}, {"value", v}}, "integral of " + f_name + " " + num(v));
    };
  });

  // cutnorm
  bool exact = false, heuristic = false;
  int restarts = 32;
  auto* cutnorm = app.add_subcommand("cutnorm", "Cut norm of a kernel or of U - W");
  cutnorm->add_option("--y", y_path, "Signed kernel file");
  cutnorm->add_option("--u", u_path, "First graphon");
  cutnorm->add_option("--w", w_path, "Second graphon");
  cutnorm->add_option("--coupling", coupling_path, "Coupling between U and W blocks");
  auto* exact_flag = cutnorm->add_flag("--exact", exact, "Exact enumeration (at most 24 blocks)");
  cutnorm->add_flag("--heuristic", heuristic, "Seeded alternating maximization")->excludes(exact_flag);
  cutnorm->add_option("--seed", seed, "Seed for the heuristic");
  cutnorm->add_option("--restarts", restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
  cutnorm->callback([&] {
    action = [&] {
      if (!coupling_path.empty()) {
        if (u_path.empty() || w_path.empty()) throw Error(ErrorKind::InvalidArgument, "--coupling needs --u and --w");
        const double v = cut_norm_distance(io::graphon_from_json(session.read(u_path)),
                                           io::graphon_from_json(session.read(w_path)),
                                           io::coupling_from_json(session.read(coupling_path)));
        session.emit(Json{{"value", v}}, "cut norm distance " + num(v));
        return;
      }
      std::optional<SignedStepKernel> y;
      if (!y_path.empty()) {
        y = io::kernel_from_json(session.read(y_path));
      } else if (!u_path.empty() && !w_path.empty()) {
        const StepGraphon u = io::graphon_from_json(session.read(u_path));
        const StepGraphon w = io::graphon_from_json(session.read(w_path));
        const auto [ru, rw] = common_refinement(u, w, Coupling::northwest_corner(u.weights(), w.weights()));
        y = SignedStepKernel::difference(ru, rw);
      } else {
        throw Error(ErrorKind::InvalidArgument, "give --y, or --u and --w");
      }
      CutNormResult r;
      if (exact) {
        r = cut_norm(*y, CutNormMode::Exact);
      } else if (heuristic) {
        r = cut_norm(*y, CutNormMode::Heuristic, seed, restarts);
      } else {
        r = cut_norm_auto(*y, seed);
      }
      session.emit(io::to_json(r), "cut norm " + num(r.value) +
                                       (r.mode == CutNormMode::Exact ? " (exact)" : " (heuristic)"));
    };
  });

  // cutdist
  auto* cutdist = app.add_subcommand("cutdist", "Upper bound on the cut distance");
  cutdist->add_option("--u", u_path, "First graphon")->required();
  cutdist->add_option("--w", w_path, "Second graphon")->required();
  cutdist->add_option("--budget", budget_path, "Optimizer config file {restarts, max_iters, tol}");
  cutdist->add_option("--seed", seed, "Seed");
  cutdist->callback([&] {
    action = [&] {
      OptimizerConfig config;
      if (!budget_path.empty()) config = io::optimizer_from_json(session.read(budget_path));
      const CutDistanceResult r = cut_distance(io::graphon_from_json(session.read(u_path)),
                                               io::graphon_from_json(session.read(w_path)), config, seed);
      std::string text = "cut distance at most " + num(r.value);
      if (r.swept) text += " (permutation sweep)";
      if (!r.certified) text += " (heuristic cut norm evaluation)";
      session.emit(io::to_json(r), text);
    };
  });

  // wstar
  int depth = 6;
  auto* wstar = app.add_subcommand("wstar", "Dyadic weak* distance");
  wstar->add_option("--u", u_path, "First graphon")->required();
  wstar->add_option("--w", w_path, "Second graphon")->required();
  wstar->add_option("--depth", depth, "Dyadic depth")->check(CLI::Range(1, 12));
  wstar->callback([&] {
    action = [&] {
      const double d = weak_star_distance(io::graphon_from_json(session.read(u_path)),
                                          io::graphon_from_json(session.read(w_path)), depth);
      session.emit(Json{{"depth", depth}, {"value", d}}, "weak* distance " + num(d) + " at depth " + std::to_string(depth));
    };
  });

  // flatness
  std::string l1_path, l2_path;
  bool exact_rational = false;
  double tol = 1e-9;
  auto* flat = app.add_subcommand("flatness", "Is L1 at least as flat as L2?");
  flat->add_option("--l1", l1_path, "First measure")->required();
  flat->add_option("--l2", l2_path, "Second measure")->required();
  flat->add_flag("--exact-rational", exact_rational, "Solve in exact rational arithmetic");
  flat->add_option("--tol", tol, "Residual tolerance");
  flat->callback([&] {
    action = [&] {
      const Json a = session.read(l1_path), b = session.read(l2_path);
      const FlatnessWitness w =
          exact_rational ? check_flatter_exact(io::rational_measure_from_json(a), io::rational_measure_from_json(b))
                         : check_flatter(io::measure_from_json(a), io::measure_from_json(b), tol);
      std::string text = w.feasible ? "feasible, residual " + num(w.residual) : "infeasible";
      if (!w.reason.empty()) text += " (" + w.reason + ")";
      session.emit(io::to_json(w), text);
      if (!w.feasible) code = kExitRefuted;
    };
  });

  // order
  std::size_t resolution = 64, count = 100;
  int order_depth = 4;
  double strict_eps = 0.125;
  auto* order = app.add_subcommand("order", "Structuredness order probes");
  order->require_subcommand(1);
  auto* check = order->add_subcommand("check", "Necessary conditions for U below W");
  check->add_option("--u", u_path, "Candidate lower graphon")->required();
  check->add_option("--w", w_path, "Candidate upper graphon")->required();
  check->callback([&] {
    action = [&] {
      const OrderVerdict v = preceq_necessary(io::graphon_from_json(session.read(u_path)),
                                              io::graphon_from_json(session.read(w_path)));
      std::string text = v.consistent() ? "consistent\n" : "refuted\n";
      for (const auto& c : v.conditions) text += std::string(c.passed ? "  pass " : "  fail ") + c.name + ": " + c.detail + "\n";
      session.emit(io::to_json(v), text);
      if (!v.consistent()) code = kExitRefuted;
    };
  });
  auto* classify = order->add_subcommand("classify", "Minimal, maximal, both or neither");
  classify->add_option("--w", w_path, "Graphon")->required();
  classify->add_option("--tol", tol, "Value tolerance");
  classify->callback([&] {
    action = [&] {
      const std::string kind(to_string(classify_extremal(io::graphon_from_json(session.read(w_path)), tol)));
      session.emit(Json{{"class", kind}}, kind);
    };
  });
  auto* strict = order->add_subcommand("strictify", "Strictly more structured graphon");
  strict->add_option("--w", w_path, "Graphon")->required();
  strict->add_option("--eps", strict_eps, "Perturbation size");
  strict->callback([&] {
    action = [&] {
      const StepGraphon w = strictify(io::graphon_from_json(session.read(w_path)), strict_eps);
      session.emit(io::to_json(w), describe(w));
    };
  });
  auto* envelope = order->add_subcommand("envelope", "Sample signatures of versions");
  auto* chi = order->add_subcommand("chi", "Hausdorff distance of sampled envelopes");
  for (auto* sub : {envelope, chi}) {
    sub->add_option("--w", w_path, "Graphon")->required();
    sub->add_option("--n", resolution, "Grid resolution")->check(CLI::PositiveNumber);
    sub->add_option("--count", count, "Random versions")->check(CLI::PositiveNumber);
    sub->add_option("--depth", order_depth, "Dyadic depth")->check(CLI::Range(1, 12));
    sub->add_option("--seed", seed, "Seed");
  }
  chi->add_option("--u", u_path, "Other graphon")->required();
  envelope->callback([&] {
    action = [&] {
      const EnvelopeSample s =
          sample_envelope(io::graphon_from_json(session.read(w_path)), resolution, count, order_depth, seed);
      session.emit(io::to_json(s), std::to_string(s.signatures.size()) + " signatures at resolution " +
                                       std::to_string(s.resolution) + ", depth " + std::to_string(s.depth));
    };
  });
  chi->callback([&] {
    action = [&] {
      const double d = chi_estimate(io::graphon_from_json(session.read(u_path)),
                                    io::graphon_from_json(session.read(w_path)), resolution, count, order_depth, seed);
      session.emit(Json{{"value", d}}, "envelope distance estimate " + num(d));
    };
  });

  // multiway
  std::vector<double> a;
  bool deterministic = false;
  std::string su_path, sw_path;
  auto* multi = app.add_subcommand("multiway", "Multiway cut matrix sets");
  multi->require_subcommand(1);
  auto* sample = multi->add_subcommand("sample", "Sample the set of multiway matrices");
  sample->add_option("--w", w_path, "Graphon")->required();
  sample->add_option("--a", a, "Comma separated part masses")->required()->delimiter(',');
  sample->add_option("--count", count, "Random transport points");
  sample->add_option("--seed", seed, "Seed");
  sample->add_flag("--deterministic", deterministic, "Vertices and greedy extremes only");
  sample->callback([&] {
    action = [&] {
      MultiwaySampling sampling;
      sampling.random_points = !deterministic;
      const MultiwayMatrixSet s = sample_multiway_set(io::graphon_from_json(session.read(w_path)), a, count, seed, sampling);
      session.emit(io::to_json(s), std::to_string(s.matrices.size()) + " distinct matrices with " +
                                       std::to_string(a.size()) + " parts");
    };
  });
  auto* hausdorff = multi->add_subcommand("hausdorff", "l1 Hausdorff distance of two sets");
  hausdorff->add_option("--su", su_path, "First set")->required();
  hausdorff->add_option("--sw", sw_path, "Second set")->required();
  hausdorff->callback([&] {
    action = [&] {
      const double d = multiway_hausdorff(io::multiway_from_json(session.read(su_path)),
                                          io::multiway_from_json(session.read(sw_path)));
      session.emit(Json{{"value", d}}, "hausdorff distance " + num(d));
    };
  });

  // reproduce
  std::string which;
  auto* repro = app.add_subcommand("reproduce", "Run a worked example with its checks");
  repro->add_option("--which", which, "Scenario")
      ->required()
      ->check(CLI::IsMember({"chessboard", "counterexample", "flatness", "chains", "multiway"}));
  repro->add_option("--eps", eps, "Family parameter for the counterexample");
  repro->add_option("--seed", seed, "Seed");
  repro->callback([&] {
    action = [&] {
      const ScenarioReport r = reproduce(which, eps, seed);
      session.emit(report_json(r), report_text(r));
      if (!r.passed()) code = kExitTolerance;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitSolver;
  }
  return code;
}

}  // namespace graphon
