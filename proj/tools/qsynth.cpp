// Copyright 2026 The qsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsynth/coupling_graph.hpp"
#include "qsynth/errors.hpp"
#include "qsynth/io.hpp"
#include "qsynth/matrix.hpp"
#include "qsynth/schedule.hpp"
#include "qsynth/single_qudit.hpp"
#include "qsynth/spectral.hpp"
#include "qsynth/two_qudit.hpp"

// Exit codes: 0 success, 1 verification failure, 2 input or usage error.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

double resolve_tolerance(const CLI::Option* tol_opt, double tol_flag) {
  if (tol_opt->count() > 0) {
    if (!(tol_flag > 0)) throw qsynth::ParseError("--tol must be positive");
    return tol_flag;
  }
  if (const char* env = std::getenv("QSYNTH_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      throw qsynth::ParseError(std::string("QSYNTH_TOL is not a positive number: ") + env);
    }
    return v;
  }
  return 1e-9;
}

void print_pulse_counts(const qsynth::Schedule& s) {
  int by_gen[5] = {0, 0, 0, 0, 0};
  for (const auto& p : s.pulses) by_gen[static_cast<int>(p.gen)]++;
  std::cout << "pulses: " << s.pulses.size() << " (x " << by_gen[0] << ", y " << by_gen[1]
            << ", z " << by_gen[2] << ", xy " << by_gen[3] << ", int " << by_gen[4] << ")\n";
}

void describe_graph(const qsynth::CouplingGraph& g, const std::string& spec) {
  std::cout << "graph: " << spec << " (d = " << g.dim() << ", " << g.edges().size()
            << " edges, simultaneous_xy = " << (g.caps().simultaneous_xy ? "true" : "false")
            << ", direct_z = " << (g.caps().direct_z ? "true" : "false") << ")\n";
}

// Saves if an output path was given, then reports counts and the optional
// verification distance. Returns the process exit code.
int finish(qsynth::Schedule& s, const qsynth::Matrix& target, const std::string& out_path,
           bool do_verify, double tol) {
  if (!out_path.empty()) {
    qsynth::save_schedule(out_path, s);
    std::cout << "schedule written to " << out_path << "\n";
  }
  print_pulse_counts(s);
  std::cout << "int pulses: " << s.int_pulse_count() << "\n";
  if (do_verify) {
    const auto report = qsynth::verify(s, target, tol);
    std::cout << "verification distance: " << report.target_distance << " (tolerance " << tol
              << ")\n";
    if (!report.pass) {
      std::cout << "FAIL\n";
      return kExitVerifyFailed;
    }
    std::cout << "PASS\n";
  }
  return kExitOk;
}

int run_synth_single(const std::string& graph_spec, const std::string& target_path,
                     const std::string& out_path, bool do_verify, bool counts_only, double tol) {
  const qsynth::CouplingGraph g = qsynth::resolve_graph(graph_spec);
  describe_graph(g, graph_spec);
  const qsynth::Matrix v = qsynth::load_unitary(target_path);
  if (v.rows() != g.dim()) {
    throw qsynth::DimensionMismatch(target_path + ": target is " + std::to_string(v.rows()) +
                                    "-dimensional but the graph has d = " +
                                    std::to_string(g.dim()));
  }
  // The rb87 preset ships with the reference spanning tree; other graphs get
  // a leaf-deletion tree rooted at d-1.
  const qsynth::SpanningTree tree =
      graph_spec == "rb87" ? qsynth::rb87_tree() : qsynth::spanning_tree(g, g.dim() - 1);
  qsynth::Schedule s = qsynth::synthesize_single(v, g, tree);

  if (!counts_only) {
    const qsynth::QRResult qr = qsynth::qr_reduce(v, g, tree);
    std::cout << "givens gates: " << qr.gates.size() << "\n";
    for (size_t i = 0; i < qr.gates.size(); ++i) {
      const auto& gt = qr.gates[i];
      std::cout << "  " << (i + 1) << ". column " << qr.gate_column[i] << " pair (" << gt.j << ","
                << gt.k << ") gamma " << gt.gamma << " phi " << gt.phi << "\n";
    }
    const qsynth::PhaseSolve ps = qsynth::diag_solve(qr.residual_diagonal, tree);
    std::cout << "diagonal theta:";
    for (double th : ps.theta) std::cout << " " << th;
    std::cout << "\nresidual global phase: " << ps.residual_global_phase << "\n";
  }
  std::cout << "global phase: " << s.global_phase << "\n";
  return finish(s, v, out_path, do_verify, tol);
}

int run_synth_cinc(int d, const std::string& out_path, bool do_verify, double tol) {
  if (d < 2) throw qsynth::ParseError("--d must be at least 2");
  qsynth::Schedule s = qsynth::cinc_sequence(d);
  return finish(s, qsynth::cinc_matrix(d), out_path, do_verify, tol);
}

int run_synth_lambda1(const std::string& graph_spec, const std::string& target_path,
                      const std::string& out_path, bool do_verify, double tol) {
  const qsynth::CouplingGraph g = qsynth::resolve_graph(graph_spec);
  describe_graph(g, graph_spec);
  const qsynth::Matrix v = qsynth::load_unitary(target_path);
  if (v.rows() != g.dim()) {
    throw qsynth::DimensionMismatch(target_path + ": target is " + std::to_string(v.rows()) +
                                    "-dimensional but the graph has d = " +
                                    std::to_string(g.dim()));
  }
  qsynth::Schedule s = qsynth::synthesize_lambda1(v, g);
  const int d = g.dim();
  qsynth::Matrix full = qsynth::Matrix::Identity(d * d, d * d);
  full.block((d - 1) * d, (d - 1) * d, d, d) = v;
  return finish(s, full, out_path, do_verify, tol);
}

int run_synth_spectral(const std::string& graph_spec, const std::string& target_path,
                       const std::string& out_path, bool do_verify, double tol) {
  const qsynth::CouplingGraph g = qsynth::resolve_graph(graph_spec);
  describe_graph(g, graph_spec);
  const qsynth::Matrix w = qsynth::load_unitary(target_path);
  const int d = g.dim();
  int n_qudits = 0;
  if (w.rows() == d) {
    n_qudits = 1;
  } else if (w.rows() == static_cast<Eigen::Index>(d) * d) {
    n_qudits = 2;
  } else {
    throw qsynth::DimensionMismatch(target_path + ": target is " + std::to_string(w.rows()) +
                                    "-dimensional, expected d = " + std::to_string(d) +
                                    " or d^2 = " + std::to_string(d * d));
  }
  std::cout << "qudits: " << n_qudits << "\n";
  qsynth::Schedule s = qsynth::spectral_synthesize(w, n_qudits, g);
  std::cout << "spectral factors applied: " << s.diagonal_rotations << "\n";
  return finish(s, w, out_path, do_verify, tol);
}

int run_simulate(const std::string& schedule_path, const std::string& out_path) {
  const qsynth::Schedule s = qsynth::load_schedule(schedule_path);
  const qsynth::Matrix m = qsynth::simulate(s);
  if (out_path.empty()) {
    std::cout << qsynth::unitary_to_json(m).dump(2) << "\n";
  } else {
    qsynth::save_unitary(out_path, m);
    std::cout << "matrix written to " << out_path << "\n";
  }
  return kExitOk;
}

int run_verify(const std::string& schedule_path, const std::string& target_path, double tol) {
  const qsynth::Schedule s = qsynth::load_schedule(schedule_path);
  const qsynth::Matrix target = qsynth::load_unitary(target_path);
  const auto report = qsynth::verify(s, target, tol);
  std::cout << "pulses: " << report.pulse_count << "\n";
  std::cout << "int pulses: " << report.int_pulse_count << "\n";
  std::cout << "verification distance: " << report.target_distance << " (tolerance " << tol
            << ")\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kExitOk : kExitVerifyFailed;
}

int run_check_entangling(const std::string& omega_path, double tol) {
  const Eigen::MatrixXd omega = qsynth::load_coupling_phases(omega_path);
  const bool entangling = qsynth::is_entangling_diagonal(omega, tol);
  std::cout << (entangling ? "entangling" : "not entangling") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qudit pulse-schedule synthesis for diagonal-coupling hardware"};
  app.require_subcommand(1);

  std::string graph_spec = "rb87";
  std::string target_path;
  std::string schedule_path;
  std::string omega_path;
  std::string out_path;
  bool do_verify = false;
  bool counts_only = false;
  double tol_flag = 1e-9;
  int cinc_d = 2;

  auto add_tol = [&](CLI::App* cmd) {
    return cmd->add_option("--tol", tol_flag,
                           "verification tolerance (default 1e-9, or QSYNTH_TOL)");
  };
  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("--graph", graph_spec, "preset (rb87, path-N, complete-N) or graph JSON file");
  };

  CLI::App* synth_single = app.add_subcommand("synth-single", "single-qudit unitary to pulses");
  add_graph(synth_single);
  synth_single->add_option("--target", target_path, "target unitary JSON")->required();
  synth_single->add_option("--out", out_path, "schedule JSON output path");
  synth_single->add_flag("--verify", do_verify, "simulate and compare against the target");
  synth_single->add_flag("--counts-only", counts_only, "suppress the gate-level report");
  const CLI::Option* tol_single = add_tol(synth_single);

  CLI::App* synth_cinc = app.add_subcommand("synth-cinc", "controlled-increment gate to pulses");
  synth_cinc->add_option("--d", cinc_d, "qudit dimension")->required();
  synth_cinc->add_option("--out", out_path, "schedule JSON output path");
  synth_cinc->add_flag("--verify", do_verify, "simulate and compare against the target");
  const CLI::Option* tol_cinc = add_tol(synth_cinc);

  CLI::App* synth_lambda1 =
      app.add_subcommand("synth-lambda1", "controlled one-qudit unitary to pulses");
  add_graph(synth_lambda1);
  synth_lambda1->add_option("--target", target_path, "controlled local unitary JSON")->required();
  synth_lambda1->add_option("--out", out_path, "schedule JSON output path");
  synth_lambda1->add_flag("--verify", do_verify, "simulate and compare against the target");
  const CLI::Option* tol_lambda1 = add_tol(synth_lambda1);

  CLI::App* synth_spectral =
      app.add_subcommand("synth-spectral", "spectral decomposition to pulses");
  add_graph(synth_spectral);
  synth_spectral->add_option("--target", target_path, "target unitary JSON (d or d^2 rows)")
      ->required();
  synth_spectral->add_option("--out", out_path, "schedule JSON output path");
  synth_spectral->add_flag("--verify", do_verify, "simulate and compare against the target");
  const CLI::Option* tol_spectral = add_tol(synth_spectral);

  CLI::App* simulate = app.add_subcommand("simulate", "schedule JSON to unitary matrix");
  simulate->add_option("--schedule", schedule_path, "schedule JSON")->required();
  simulate->add_option("--out", out_path, "matrix JSON output path (default stdout)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "compare a schedule against a target");
  verify_cmd->add_option("--schedule", schedule_path, "schedule JSON")->required();
  verify_cmd->add_option("--target", target_path, "target unitary JSON")->required();
  const CLI::Option* tol_verify = add_tol(verify_cmd);

  CLI::App* check_entangling =
      app.add_subcommand("check-entangling", "test a diagonal coupling phase pattern");
  check_entangling->add_option("--omega", omega_path, "phase matrix JSON")->required();
  const CLI::Option* tol_check = add_tol(check_entangling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 prints its own message; fold usage problems into the input-error code.
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (synth_single->parsed()) {
      return run_synth_single(graph_spec, target_path, out_path, do_verify, counts_only,
                              resolve_tolerance(tol_single, tol_flag));
    }
    if (synth_cinc->parsed()) {
      return run_synth_cinc(cinc_d, out_path, do_verify, resolve_tolerance(tol_cinc, tol_flag));
    }
    if (synth_lambda1->parsed()) {
      return run_synth_lambda1(graph_spec, target_path, out_path, do_verify,
                               resolve_tolerance(tol_lambda1, tol_flag));
    }
    if (synth_spectral->parsed()) {
      return run_synth_spectral(graph_spec, target_path, out_path, do_verify,
                                resolve_tolerance(tol_spectral, tol_flag));
    }
    if (simulate->parsed()) return run_simulate(schedule_path, out_path);
    if (verify_cmd->parsed()) {
      return run_verify(schedule_path, target_path, resolve_tolerance(tol_verify, tol_flag));
    }
    if (check_entangling->parsed()) {
      return run_check_entangling(omega_path, resolve_tolerance(tol_check, tol_flag));
    }
  } catch (const qsynth::DisconnectedGraph& e) {
    std::cerr << "error: " << e.what()
              << "\nsynthesis needs a connected coupling graph: QR elimination only reaches "
                 "diagonal form when every basis state is linked to the pivot.\n";
    return kExitInputError;
  } catch (const qsynth::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
