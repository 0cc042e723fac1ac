#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "erlangtail/errors.hpp"
#include "erlangtail/fuzz.hpp"
#include "erlangtail/io.hpp"
#include "erlangtail/models.hpp"
#include "erlangtail/pencil.hpp"
#include "erlangtail/simulator.hpp"
#include "erlangtail/spectral.hpp"

namespace erlangtail::cli {

namespace {

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

void emit_json(const Json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

MetzlerPencil explicit_pencil(const ExplicitPencilSpec& spec) { return MetzlerPencil::polynomial(spec.coefficients); }

ValidationReport validate_explicit(const ExplicitPencilSpec& spec) {
  ValidationReport report;
  const auto pencil = explicit_pencil(spec);
  const Eigen::MatrixXd at_root = pencil.evaluate_real(spec.root);
  ClauseResult metzler{"metzler_at_root", "A(root) has nonnegative off-diagonal entries", is_metzler(at_root), ""};
  report.clauses.push_back(metzler);

  bool weights_ok = true;
  std::string detail;
  for (const auto* vec : {&spec.v, &spec.w}) {
    if (!*vec) continue;
    if (static_cast<std::size_t>((*vec)->size()) != pencil.size()) {
      weights_ok = false;
      detail = "weight vector length differs from the pencil size";
    } else if (((*vec)->array() < 0.0).any()) {
      weights_ok = false;
      detail = "weight vectors must be nonnegative";
    }
  }
  report.clauses.push_back({"weights", "v and w are nonnegative with matching length", weights_ok, detail});

  report.zeta_at_zero = std::numeric_limits<double>::quiet_NaN();
  if (metzler.passed) {
    const auto partition = pencil.partition_at(spec.root);
    const double zeta = spectral_abscissa_blockwise(at_root, partition);
    const bool on_spectrum = std::abs(zeta) <= 1e-8 * std::max(1.0, at_root.cwiseAbs().maxCoeff());
    report.clauses.push_back({"zeta_at_root", "zeta(A(root)) = 0", on_spectrum, "zeta = " + fmt("%.17g", zeta)});
  }
  report.valid = std::all_of(report.clauses.begin(), report.clauses.end(), [](const auto& c) { return c.passed; });
  return report;
}

ValidationReport validate_spec(const SpecFile& spec) {
  switch (spec.model) {
    case ModelKind::continuous: return validate(*spec.continuous);
    case ModelKind::discrete: return validate(*spec.discrete);
    case ModelKind::explicit_pencil: return validate_explicit(*spec.explicit_pencil);
  }
  throw InputError("unknown model kind");
}

int cmd_validate(const std::string& spec_path, const std::string& out_path, std::ostream& out) {
  const auto spec = read_spec_file(spec_path);
  const auto report = validate_spec(spec);
  for (const auto& clause : report.clauses) {
    out << (clause.passed ? "PASS " : "FAIL ") << clause.id << ": " << clause.text;
    if (!clause.detail.empty()) out << " (" << clause.detail << ")";
    out << "\n";
  }
  out << (report.valid ? "valid" : "invalid") << "\n";
  if (!out_path.empty()) write_text_file(out_path, report_envelope("validate", model_digest(spec), to_json(report)).dump(2) + "\n");
  return report.valid ? exit_ok : exit_domain;
}

int cmd_analyze(const std::string& spec_path, const std::string& out_path, std::ostream& out) {
  const auto spec = read_spec_file(spec_path);
  Json payload;
  switch (spec.model) {
    case ModelKind::continuous: payload = to_json(analyze(*spec.continuous)); break;
    case ModelKind::discrete: payload = to_json(analyze(*spec.discrete)); break;
    case ModelKind::explicit_pencil: {
      const auto& e = *spec.explicit_pencil;
      const auto validation = validate_explicit(e);
      if (!validation.valid) {
        std::string ids;
        for (const auto& id : validation.failed_ids()) ids += (ids.empty() ? "" : ", ") + id;
        throw DomainError("explicit pencil fails validation: " + ids);
      }
      payload = to_json(pole_order(explicit_pencil(e), e.root, e.v, e.w));
      break;
    }
  }
  emit_json(report_envelope("analyze", model_digest(spec), std::move(payload)), out_path, out);
  return exit_ok;
}

struct SimulateFlags {
  std::string spec_path;
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  std::string prefix;
  unsigned workers = 1;
  std::string mode = "regenerative";
  std::size_t pool_factor = 0;
  std::size_t thinning = 1;
  std::vector<double> s_points;
  std::string tail_side;
  double q_lo = TailWindow{}.q_lo;
  double q_hi = TailWindow{}.q_hi;
  std::size_t min_tail = TailWindow{}.min_tail;
  std::size_t survival_points = 512;
};

std::vector<double> default_s_points(const TailReport& report) {
  std::vector<double> s;
  if (report.upper.exists) {
    s.push_back(0.25 * report.upper.rate);
    s.push_back(0.5 * report.upper.rate);
  }
  if (report.lower.exists) s.push_back(-0.5 * report.lower.rate);
  return s;
}

Json analytic_json(const TailReport& report) {
  Json j;
  j["alpha"] = report.upper.exists ? Json(report.upper.rate) : Json(nullptr);
  j["d_alpha"] = report.upper.exists ? Json(report.upper.d) : Json(nullptr);
  j["beta"] = report.lower.exists ? Json(report.lower.rate) : Json(nullptr);
  j["d_beta"] = report.lower.exists ? Json(report.lower.d) : Json(nullptr);
  return j;
}

int cmd_simulate(const SimulateFlags& flags, std::ostream& out, std::ostream& err) {
  const auto spec = read_spec_file(flags.spec_path);
  if (spec.model == ModelKind::explicit_pencil) throw InputError("explicit pencils have no process to simulate");
  if (flags.paths == 0) throw InputError("--paths must be positive");
  if (flags.prefix.empty()) throw InputError("--out is required");

  SimulationOptions options;
  options.workers = flags.workers;
  SampleSet samples;
  TailReport report;
  std::vector<LaplaceComparison> table;
  std::optional<std::string> table_note;
  if (spec.model == ModelKind::continuous) {
    report = analyze(*spec.continuous);
    samples = simulate_continuous(*spec.continuous, flags.paths, flags.seed, options);
  } else {
    report = analyze(*spec.discrete);
    DiscreteOptions dopts;
    if (flags.mode == "regenerative") {
      dopts.mode = StationaryMode::regenerative;
    } else if (flags.mode == "long_run") {
      dopts.mode = StationaryMode::long_run;
    } else {
      throw InputError("--mode must be regenerative or long_run");
    }
    dopts.pool_factor = flags.pool_factor;
    dopts.thinning = flags.thinning;
    samples = simulate_discrete(*spec.discrete, flags.paths, flags.seed, dopts, options);
  }
  write_samples(flags.prefix, samples);
  write_survival_csv(flags.prefix + ".survival.csv", survival_curve(samples.values, flags.survival_points));

  const auto s_points = flags.s_points.empty() ? default_s_points(report) : flags.s_points;
  if (spec.model == ModelKind::continuous) {
    table = compare_laplace(samples, *spec.continuous, s_points);
  } else if (!samples.cycle_lengths.empty()) {
    table = compare_laplace(samples, *spec.discrete, s_points);
  } else {
    table_note = "comparison needs whole regenerative cycles (regenerative mode with pool factor 0)";
  }

  TailWindow window;
  window.q_lo = flags.q_lo;
  window.q_hi = flags.q_hi;
  window.min_tail = flags.min_tail;
  if (flags.tail_side.empty()) {
    window.side = report.upper.exists || !report.lower.exists ? TailSideChoice::upper : TailSideChoice::lower;
  } else if (flags.tail_side == "upper" || flags.tail_side == "lower") {
    window.side = flags.tail_side == "upper" ? TailSideChoice::upper : TailSideChoice::lower;
  } else {
    throw InputError("--tail must be upper or lower");
  }

  Json summary;
  summary["samples"] = {{"count", samples.values.size()}, {"kind", to_string(samples.kind)}, {"seed", samples.seed}};
  summary["analytic"] = analytic_json(report);
  Json fit_json;
  out << "samples: " << samples.values.size() << " (" << to_string(samples.kind) << ")\n";
  try {
    const auto fit = fit_tail(samples.values, window);
    fit_json = to_json(fit);
    out << "tail fit (" << (window.side == TailSideChoice::upper ? "upper" : "lower") << "): rate "
        << fmt("%.6g", fit.alpha_hat) << " (se " << fmt("%.2g", fit.stderr_alpha) << "), d " << fit.d_hat << " (raw "
        << fmt("%.3f", fit.d_raw) << "), window [" << fmt("%.4g", fit.w_lo) << ", " << fmt("%.4g", fit.w_hi)
        << "], R^2 " << fmt("%.6f", fit.r_squared) << "\n";
  } catch (const DomainError& e) {
    fit_json = {{"error", e.what()}};
    err << "tail fit skipped: " << e.what() << "\n";
  }
  fit_json["side"] = window.side == TailSideChoice::upper ? "upper" : "lower";
  summary["tail_fit"] = std::move(fit_json);

  Json rows = Json::array();
  if (!table.empty()) out << "laplace: s, empirical, predicted, std_error, z\n";
  for (const auto& row : table) {
    rows.push_back({{"s", row.s},
                    {"empirical", row.empirical},
                    {"predicted", row.predicted},
                    {"std_error", row.std_error},
                    {"z", std::isfinite(row.z) ? Json(row.z) : Json(nullptr)}});
    out << "  " << fmt("%.6g", row.s) << ", " << fmt("%.8g", row.empirical) << ", " << fmt("%.8g", row.predicted)
        << ", " << fmt("%.3g", row.std_error) << ", " << fmt("%.3f", row.z) << "\n";
  }
  summary["laplace"] = std::move(rows);
  if (table_note) summary["laplace_note"] = *table_note;
  write_text_file(flags.prefix + ".summary.json",
                  report_envelope("simulate", model_digest(spec), std::move(summary)).dump(2) + "\n");
  return exit_ok;
}

struct FuzzFlags {
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  std::size_t max_size = 8;
  double tol_rank = SpectralTolerances{}.rank;
  std::string out_path;
  std::string failure_prefix = "rothblum_failure";
  unsigned workers = 1;
};

struct FuzzRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t classes = 0;
  std::optional<std::size_t> index;
  std::size_t chain_length = 0;
  bool agree = false;
  std::string note;
  Eigen::MatrixXd matrix;
};

int cmd_rothblum_fuzz(const FuzzFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.instances == 0) throw InputError("--instances must be at least 1");
  if (flags.max_size == 0) throw InputError("--max-size must be at least 1");
  SpectralTolerances tol;
  tol.rank = flags.tol_rank;
  FuzzOptions options;
  options.max_size = flags.max_size;

  std::vector<FuzzRow> rows(flags.instances);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < rows.size(); i += stride) {
      auto& row = rows[i];
      row.seed = flags.seed + i;
      const auto instance = random_reducible_metzler(row.seed, options);
      row.matrix = instance.matrix;
      row.n = static_cast<std::size_t>(instance.matrix.rows());
      row.classes = instance.planted_classes.size();
      try {
        const auto check = rothblum_check(instance.matrix, tol);
        row.index = check.index;
        row.chain_length = check.chain_length;
        row.agree = check.agree;
      } catch (const std::exception& e) {
        row.note = e.what();
      }
    }
  };
  unsigned workers = flags.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : flags.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, rows.size()));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w, workers);
    for (auto& t : threads) t.join();
  }

  std::ostringstream csv;
  csv << "instance,seed,N,classes,index,chain_length,agree\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    csv << i << "," << row.seed << "," << row.n << "," << row.classes << ","
        << (row.index ? std::to_string(*row.index) : std::string("")) << "," << row.chain_length << ","
        << (row.agree ? "true" : "false") << "\n";
    if (row.agree) continue;
    ++failures;
    const std::string path = flags.failure_prefix + "_" + std::to_string(row.seed) + ".txt";
    std::string text = "# seed " + std::to_string(row.seed);
    if (!row.note.empty()) text += ": " + row.note;
    write_text_file(path, text + "\n" + format_matrix_text(row.matrix));
    err << "disagreement at seed " << row.seed << " written to " << path << "\n";
  }
  if (flags.out_path.empty()) {
    out << csv.str();
  } else {
    write_text_file(flags.out_path, csv.str());
    out << rows.size() - failures << "/" << rows.size() << " instances agree\n";
  }
  return failures == 0 ? exit_ok : exit_domain;
}

int cmd_classes(const std::string& matrix_path, const std::string& out_path, std::ostream& out) {
  const Eigen::MatrixXd a = read_matrix_text(matrix_path);
  const auto partition = scc_partition(digraph_of_matrix(a));
  Json summary = classes_to_json(partition);
  const auto zetas = block_abscissae(a, partition);
  summary["block_abscissae"] = zetas;
  Json perm = Json::array();
  for (auto v : block_permutation(partition)) perm.push_back(v + 1);
  summary["block_permutation"] = std::move(perm);
  if (is_metzler(a)) {
    const auto check = rothblum_check(a);
    Json basic = Json::array();
    for (std::size_t k = 0; k < check.basic_flags.size(); ++k) {
      if (check.basic_flags[k]) basic.push_back(k + 1);
    }
    summary["abscissa"] = check.abscissa;
    summary["basic_classes"] = std::move(basic);
    summary["longest_chain_length"] = check.chain_length;
    summary["eigenvalue_index"] = check.index;
  }
  emit_json(report_envelope("classes", fnv1a64(format_matrix_text(a)), std::move(summary)), out_path, out);
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Erlang-like tails of Markov-modulated growth models", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;

  auto* validate_cmd = app.add_subcommand("validate", "Check a model spec against the model assumptions");
  validate_cmd->add_option("spec", spec_path, "Spec file")->required();
  validate_cmd->add_option("--out", out_path, "Write a JSON report here");

  auto* analyze_cmd = app.add_subcommand("analyze", "Compute tail rates and shapes (or a pole report)");
  analyze_cmd->add_option("spec", spec_path, "Spec file")->required();
  analyze_cmd->add_option("--out", out_path, "Report path; stdout if omitted");

  SimulateFlags sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo samples, survival curve, tail fit and transform check");
  simulate_cmd->add_option("spec", sim.spec_path, "Spec file")->required();
  simulate_cmd->add_option("--paths", sim.paths, "Paths (continuous) or stationary draws (discrete)");
  simulate_cmd->add_option("--seed", sim.seed, "Root seed");
  simulate_cmd->add_option("--out", sim.prefix, "Output prefix")->required();
  simulate_cmd->add_option("--workers", sim.workers, "Worker threads, 0 for all cores");
  simulate_cmd->add_option("--mode", sim.mode, "Discrete sampler: regenerative or long_run");
  simulate_cmd->add_option("--pool-factor", sim.pool_factor, "Regenerative: draw from cycles covering k*n positions");
  simulate_cmd->add_option("--thinning", sim.thinning, "long_run: keep every k-th step");
  simulate_cmd->add_option("--s", sim.s_points, "Transform evaluation points");
  simulate_cmd->add_option("--tail", sim.tail_side, "Tail to fit: upper or lower");
  simulate_cmd->add_option("--q-lo", sim.q_lo, "Fit window start quantile");
  simulate_cmd->add_option("--q-hi", sim.q_hi, "Fit window end quantile");
  simulate_cmd->add_option("--min-tail", sim.min_tail, "Minimum samples beyond the window start");
  simulate_cmd->add_option("--survival-points", sim.survival_points, "Rows in the survival CSV");

  FuzzFlags fuzz;
  auto* fuzz_cmd = app.add_subcommand("rothblum-fuzz", "Compare eigenvalue index with longest chain length");
  fuzz_cmd->add_option("--instances", fuzz.instances, "Number of random instances");
  fuzz_cmd->add_option("--seed", fuzz.seed, "Seed of the first instance; instance i uses seed + i");
  fuzz_cmd->add_option("--max-size", fuzz.max_size, "Largest matrix order");
  fuzz_cmd->add_option("--tol-rank", fuzz.tol_rank, "Relative singular-value cutoff");
  fuzz_cmd->add_option("--out", fuzz.out_path, "CSV path; stdout if omitted");
  fuzz_cmd->add_option("--failures", fuzz.failure_prefix, "Prefix for disagreeing instances");
  fuzz_cmd->add_option("--workers", fuzz.workers, "Worker threads, 0 for all cores");

  std::string matrix_path;
  auto* classes_cmd = app.add_subcommand("classes", "Class structure of a matrix file");
  classes_cmd->add_option("matrix", matrix_path, "Matrix text file")->required();
  classes_cmd->add_option("--out", out_path, "Report path; stdout if omitted");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*validate_cmd) return cmd_validate(spec_path, out_path, out);
    if (*analyze_cmd) return cmd_analyze(spec_path, out_path, out);
    if (*simulate_cmd) return cmd_simulate(sim, out, err);
    if (*fuzz_cmd) return cmd_rothblum_fuzz(fuzz, out, err);
    if (*classes_cmd) return cmd_classes(matrix_path, out_path, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return exit_domain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_input;
}

}  // namespace erlangtail::cli
