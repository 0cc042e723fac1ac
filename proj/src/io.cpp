#include "erlangtail/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "erlangtail/errors.hpp"

namespace erlangtail {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::continuous: return "continuous";
    case ModelKind::discrete: return "discrete";
    case ModelKind::explicit_pencil: return "explicit_pencil";
  }
  return "unknown";
}

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw InputError(where + ": unknown field '" + item.key() + "'");
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

void require_object(const Json& node, const std::string& where) {
  if (!node.is_object()) throw InputError(where + ": expected an object");
}

double get_number(const Json& node, const std::string& where) {
  if (!node.is_number()) throw InputError(where + ": expected a number");
  const double x = node.get<double>();
  if (!std::isfinite(x)) throw InputError(where + ": number is not finite");
  return x;
}

Eigen::VectorXd get_vector(const Json& node, const std::string& where) {
  if (!node.is_array()) throw InputError(where + ": expected an array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = get_number(node[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::MatrixXd get_square(const Json& node, const std::string& where) {
  if (!node.is_array() || node.empty()) throw InputError(where + ": expected a nonempty array of rows");
  const auto n = node.size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    const auto row = get_vector(node[i], row_where);
    if (static_cast<std::size_t>(row.size()) != n) throw InputError(row_where + ": expected " + std::to_string(n) + " entries");
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

TransformMatrix get_transform_grid(const Json* node, std::size_t n, const std::string& where) {
  TransformMatrix out(n, std::vector<TransformSpec>(n));
  if (node == nullptr || node->is_null()) return out;
  if (!node->is_array() || node->size() != n) throw InputError(where + ": expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = (*node)[i];
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) throw InputError(row_where + ": expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = transform_from_json(row[j], TransformRole::laplace_transform, row_where + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json grid_json(const TransformMatrix& grid) {
  Json out = Json::array();
  for (const auto& row : grid) {
    Json r = Json::array();
    for (const auto& spec : row) r.push_back(to_json(spec));
    out.push_back(std::move(r));
  }
  return out;
}

// JSON has no infinities; they become null.
Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string with_position(const std::string& text, std::size_t byte, const std::string& message) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

}  // namespace

TransformSpec transform_from_json(const Json& node, TransformRole role, const std::string& where) {
  if (node.is_null()) return TransformSpec::unit(role);
  require_object(node, where);
  const auto& kind_node = require(node, "kind", where);
  if (!kind_node.is_string()) throw InputError(where + ".kind: expected a string");
  const auto kind = kind_node.get<std::string>();

  TransformSpec spec;
  if (kind == "unit") {
    reject_unknown(node, {"kind", "compound_poisson"}, where);
    spec = TransformSpec::unit(role);
  } else if (kind == "constant_shift") {
    reject_unknown(node, {"kind", "shift", "compound_poisson"}, where);
    spec = TransformSpec::constant_shift(get_number(require(node, "shift", where), where + ".shift"), role);
  } else if (kind == "gaussian") {
    reject_unknown(node, {"kind", "mean", "variance", "compound_poisson"}, where);
    spec = TransformSpec::gaussian(get_number(require(node, "mean", where), where + ".mean"),
                                   get_number(require(node, "variance", where), where + ".variance"), role);
  } else if (kind == "exponential_right" || kind == "exponential_left") {
    reject_unknown(node, {"kind", "rate"}, where);
    const double rate = get_number(require(node, "rate", where), where + ".rate");
    spec = kind == "exponential_right" ? TransformSpec::exponential_right(rate) : TransformSpec::exponential_left(rate);
    spec.role = role;
  } else if (kind == "asymmetric_laplace") {
    reject_unknown(node, {"kind", "rate_right", "rate_left", "weight_right"}, where);
    spec = TransformSpec::asymmetric_laplace(get_number(require(node, "rate_right", where), where + ".rate_right"),
                                             get_number(require(node, "rate_left", where), where + ".rate_left"),
                                             get_number(require(node, "weight_right", where), where + ".weight_right"));
    spec.role = role;
  } else {
    throw InputError(where + ".kind: unknown distribution kind '" + kind + "'");
  }

  if (const auto it = node.find("compound_poisson"); it != node.end() && !it->is_null()) {
    const std::string cp_where = where + ".compound_poisson";
    if (role != TransformRole::levy_exponent) throw InputError(cp_where + ": only allowed on Levy exponents");
    require_object(*it, cp_where);
    reject_unknown(*it, {"intensity", "jump"}, cp_where);
    const double intensity = get_number(require(*it, "intensity", cp_where), cp_where + ".intensity");
    const auto jump = transform_from_json(require(*it, "jump", cp_where), TransformRole::laplace_transform, cp_where + ".jump");
    spec = spec.with_compound_poisson(intensity, jump);
  }
  try {
    check_spec(spec);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return spec;
}

Json to_json(const TransformSpec& spec) {
  Json out;
  out["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case TransformKind::unit: break;
    case TransformKind::constant_shift: out["shift"] = spec.shift; break;
    case TransformKind::gaussian:
      out["mean"] = spec.mean;
      out["variance"] = spec.variance;
      break;
    case TransformKind::exponential_right:
    case TransformKind::exponential_left: out["rate"] = spec.rate; break;
    case TransformKind::asymmetric_laplace:
      out["rate_right"] = spec.rate_right;
      out["rate_left"] = spec.rate_left;
      out["weight_right"] = spec.weight_right;
      break;
  }
  if (spec.compound_poisson) {
    out["compound_poisson"] = {{"intensity", spec.compound_poisson->intensity},
                               {"jump", to_json(*spec.compound_poisson->jump)}};
  }
  return out;
}

SpecFile spec_from_json(const Json& doc) {
  require_object(doc, "spec");
  const auto& version = require(doc, "format_version", "spec");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw InputError("spec.format_version: expected " + std::to_string(kFormatVersion));
  }
  const auto& model_node = require(doc, "model", "spec");
  if (!model_node.is_string()) throw InputError("spec.model: expected a string");
  const auto model = model_node.get<std::string>();

  SpecFile out;
  if (model == "continuous") {
    reject_unknown(doc, {"format_version", "model", "generator", "initial_law", "intensities", "levy", "jumps"}, "spec");
    ContinuousModelSpec spec;
    spec.generator = get_square(require(doc, "generator", "spec"), "spec.generator");
    const auto n = static_cast<std::size_t>(spec.generator.rows());
    spec.initial_law = get_vector(require(doc, "initial_law", "spec"), "spec.initial_law");
    spec.intensities = get_vector(require(doc, "intensities", "spec"), "spec.intensities");
    if (static_cast<std::size_t>(spec.initial_law.size()) != n) throw InputError("spec.initial_law: expected N entries");
    if (static_cast<std::size_t>(spec.intensities.size()) != n) throw InputError("spec.intensities: expected N entries");
    const auto& levy = require(doc, "levy", "spec");
    if (!levy.is_array() || levy.size() != n) throw InputError("spec.levy: expected N entries");
    for (std::size_t i = 0; i < n; ++i) {
      spec.levy.push_back(transform_from_json(levy[i], TransformRole::levy_exponent, "spec.levy[" + std::to_string(i) + "]"));
    }
    const auto it = doc.find("jumps");
    spec.jumps = get_transform_grid(it == doc.end() ? nullptr : &*it, n, "spec.jumps");
    out.model = ModelKind::continuous;
    out.continuous = std::move(spec);
  } else if (model == "discrete") {
    reject_unknown(doc, {"format_version", "model", "transition", "survival", "initial_law", "increments"}, "spec");
    DiscreteModelSpec spec;
    spec.transition = get_square(require(doc, "transition", "spec"), "spec.transition");
    const auto n = static_cast<std::size_t>(spec.transition.rows());
    spec.survival = get_square(require(doc, "survival", "spec"), "spec.survival");
    if (static_cast<std::size_t>(spec.survival.rows()) != n) throw InputError("spec.survival: expected N x N");
    spec.initial_law = get_vector(require(doc, "initial_law", "spec"), "spec.initial_law");
    if (static_cast<std::size_t>(spec.initial_law.size()) != n) throw InputError("spec.initial_law: expected N entries");
    const auto it = doc.find("increments");
    spec.increments = get_transform_grid(it == doc.end() ? nullptr : &*it, n, "spec.increments");
    out.model = ModelKind::discrete;
    out.discrete = std::move(spec);
  } else if (model == "explicit_pencil") {
    reject_unknown(doc, {"format_version", "model", "coefficients", "root", "v", "w"}, "spec");
    ExplicitPencilSpec spec;
    const auto& coefficients = require(doc, "coefficients", "spec");
    if (!coefficients.is_array() || coefficients.empty() || coefficients.size() > 5) {
      throw InputError("spec.coefficients: expected 1 to 5 matrices");
    }
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      spec.coefficients.push_back(get_square(coefficients[k], "spec.coefficients[" + std::to_string(k) + "]"));
      if (spec.coefficients.back().rows() != spec.coefficients.front().rows()) {
        throw InputError("spec.coefficients[" + std::to_string(k) + "]: size differs from the first matrix");
      }
    }
    const auto n = spec.coefficients.front().rows();
    spec.root = get_number(require(doc, "root", "spec"), "spec.root");
    const bool has_v = doc.contains("v") && !doc["v"].is_null();
    const bool has_w = doc.contains("w") && !doc["w"].is_null();
    if (has_v != has_w) throw InputError("spec: v and w must be given together");
    if (has_v) {
      spec.v = get_vector(doc["v"], "spec.v");
      spec.w = get_vector(doc["w"], "spec.w");
      if (spec.v->size() != n || spec.w->size() != n) throw InputError("spec.v, spec.w: expected N entries");
    }
    out.model = ModelKind::explicit_pencil;
    out.explicit_pencil = std::move(spec);
  } else {
    throw InputError("spec.model: expected continuous, discrete or explicit_pencil, got '" + model + "'");
  }
  return out;
}

SpecFile parse_spec_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(with_position(text, e.byte == 0 ? 0 : e.byte - 1, "JSON syntax error"));
  }
  return spec_from_json(doc);
}

SpecFile read_spec_file(const std::filesystem::path& path) { return parse_spec_text(read_text_file(path)); }

Json to_json(const ContinuousModelSpec& spec) {
  Json levy = Json::array();
  for (const auto& l : spec.levy) levy.push_back(to_json(l));
  return {{"format_version", kFormatVersion},
          {"model", "continuous"},
          {"generator", matrix_json(spec.generator)},
          {"initial_law", vector_json(spec.initial_law)},
          {"intensities", vector_json(spec.intensities)},
          {"levy", std::move(levy)},
          {"jumps", grid_json(spec.jumps)}};
}

Json to_json(const DiscreteModelSpec& spec) {
  return {{"format_version", kFormatVersion},
          {"model", "discrete"},
          {"transition", matrix_json(spec.transition)},
          {"survival", matrix_json(spec.survival)},
          {"initial_law", vector_json(spec.initial_law)},
          {"increments", grid_json(spec.increments)}};
}

Json to_json(const ExplicitPencilSpec& spec) {
  Json coefficients = Json::array();
  for (const auto& c : spec.coefficients) coefficients.push_back(matrix_json(c));
  return {{"format_version", kFormatVersion},
          {"model", "explicit_pencil"},
          {"coefficients", std::move(coefficients)},
          {"root", spec.root},
          {"v", spec.v ? vector_json(*spec.v) : Json(nullptr)},
          {"w", spec.w ? vector_json(*spec.w) : Json(nullptr)}};
}

Json to_json(const SpecFile& spec) {
  switch (spec.model) {
    case ModelKind::continuous: return to_json(*spec.continuous);
    case ModelKind::discrete: return to_json(*spec.discrete);
    case ModelKind::explicit_pencil: return to_json(*spec.explicit_pencil);
  }
  return nullptr;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::uint64_t model_digest(const ContinuousModelSpec& spec) { return fnv1a64(to_json(spec).dump()); }
std::uint64_t model_digest(const DiscreteModelSpec& spec) { return fnv1a64(to_json(spec).dump()); }
std::uint64_t model_digest(const SpecFile& spec) { return fnv1a64(to_json(spec).dump()); }

std::string hex_digest(std::uint64_t digest) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << digest;
  return os.str();
}

Json to_json(const ValidationReport& report) {
  Json clauses = Json::array();
  for (const auto& c : report.clauses) {
    clauses.push_back({{"id", c.id}, {"text", c.text}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"valid", report.valid}, {"zeta_at_zero", number_or_null(report.zeta_at_zero)}, {"clauses", std::move(clauses)}};
}

Json classes_to_json(const ClassPartition& partition) {
  Json classes = Json::array();
  for (const auto& members : partition.classes()) {
    Json c = Json::array();
    for (auto v : members) c.push_back(v + 1);
    classes.push_back(std::move(c));
  }
  Json order = Json::array();
  for (std::size_t j = 0; j < partition.class_count(); ++j) {
    for (std::size_t k = 0; k < partition.class_count(); ++k) {
      if (partition.precedes(j, k)) order.push_back({j + 1, k + 1});
    }
  }
  const auto ends = initial_and_final_classes(partition);
  Json initial = Json::array();
  Json final_classes = Json::array();
  for (auto k : ends.initial) initial.push_back(k + 1);
  for (auto k : ends.final_classes) final_classes.push_back(k + 1);
  return {{"classes", std::move(classes)},
          {"strict_order", std::move(order)},
          {"initial", std::move(initial)},
          {"final", std::move(final_classes)}};
}

namespace {

Json flag_indices(const std::vector<bool>& flags) {
  Json out = Json::array();
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k]) out.push_back(k + 1);
  }
  return out;
}

Json side_json(const TailSide& side, const char* rate_name, const char* order_name) {
  Json out;
  out["exists"] = side.exists;
  out[rate_name] = side.exists ? Json(side.rate) : Json(nullptr);
  out[order_name] = side.exists ? Json(side.d) : Json(nullptr);
  out["d_weighted"] = side.exists ? Json(side.d_weighted) : Json(nullptr);
  out["reason_if_absent"] = to_string(side.root.reason);
  out["root_bracket"] = {side.root.bracket_lo, side.root.bracket_hi};
  out["zeta_residual"] = side.root.zeta_residual;
  out["basic_classes"] = flag_indices(side.basic_flags);
  out["sign_condition"] = to_string(side.sign_condition);
  out["pole_status"] = to_string(side.pole_status);
  out["numeric_order"] = side.numeric_order;
  out["numeric_order_stable"] = side.numeric_order_stable;
  return out;
}

Json probe_json(const LaurentProbe& probe) {
  return {{"order", probe.order},
          {"order_estimate", probe.order_estimate},
          {"stable", probe.stable},
          {"slopes", probe.slopes},
          {"radii", probe.radii}};
}

Json nan_to_null(const std::vector<double>& values) {
  Json out = Json::array();
  for (double x : values) out.push_back(number_or_null(x));
  return out;
}

}  // namespace

Json to_json(const TailReport& report) {
  Json out;
  out["model"] = to_string(report.kind);
  out["upper"] = side_json(report.upper, "alpha", "d_alpha");
  out["lower"] = side_json(report.lower, "beta", "d_beta");
  out["class_summary"] = classes_to_json(report.classes);
  out["diagnostics"] = {{"zeta_at_zero", report.zeta_at_zero},
                        {"strip", {number_or_null(report.strip.left), number_or_null(report.strip.right)}}};
  return out;
}

Json to_json(const PoleReport& report) {
  Json offenders = Json::array();
  for (const auto& [m, k] : report.condition_v_offenders) offenders.push_back({m + 1, k + 1});
  Json out;
  out["root"] = report.root;
  out["class_summary"] = classes_to_json(report.partition);
  out["basic_classes"] = flag_indices(report.basic_flags);
  out["d"] = report.d;
  out["d_weighted"] = report.d_weighted ? Json(*report.d_weighted) : Json(nullptr);
  out["status"] = to_string(report.status);
  out["diagnosis"] = report.diagnosis;
  out["condition_v"] = {{"ok", report.condition_v_ok}, {"offending_entries", std::move(offenders)}};
  out["condition_vi"] = {{"status", to_string(report.sign_condition.status)},
                         {"eta", report.sign_condition.eta},
                         {"left_derivative", nan_to_null(report.sign_condition.left_derivative)},
                         {"right_derivative", nan_to_null(report.sign_condition.right_derivative)}};
  out["numeric"] = probe_json(report.probe);
  out["numeric_order_estimate"] = report.numeric_order_estimate;
  if (report.weighted_probe) out["numeric_weighted"] = probe_json(*report.weighted_probe);
  out["leading_coefficient_block_signs"] = report.block_signs;
  out["block_signs_match_prediction"] = report.block_signs_ok;
  return out;
}

Json to_json(const TailFit& fit) {
  return {{"alpha_hat", fit.alpha_hat},   {"stderr_alpha", fit.stderr_alpha}, {"log_coefficient", fit.log_coefficient},
          {"d_raw", fit.d_raw},           {"d_hat", fit.d_hat},               {"window", {fit.w_lo, fit.w_hi}},
          {"r_squared", fit.r_squared},   {"tail_count", fit.tail_count}};
}

Json report_envelope(const std::string& command, std::uint64_t digest, Json payload) {
  return {{"tool", kToolName},
          {"tool_version", kToolVersion},
          {"command", command},
          {"input_digest", hex_digest(digest)},
          {"result", std::move(payload)}};
}

Eigen::MatrixXd parse_matrix_text(const std::string& text) {
  std::istringstream lines(text);
  std::vector<std::vector<double>> rows;
  std::string line;
  long expected = -1;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + token + "' as a number");
      }
    }
    if (values.empty()) continue;
    if (expected < 0) {
      if (values.size() != 1 || values[0] < 1 || values[0] != std::floor(values[0])) {
        throw InputError("line " + std::to_string(line_no) + ": first line must hold the size N");
      }
      expected = static_cast<long>(values[0]);
      continue;
    }
    if (static_cast<long>(values.size()) != expected) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) + " entries");
    }
    rows.push_back(std::move(values));
  }
  if (expected < 0) throw InputError("matrix file is empty");
  if (static_cast<long>(rows.size()) != expected) {
    throw InputError("expected " + std::to_string(expected) + " rows, found " + std::to_string(rows.size()));
  }
  Eigen::MatrixXd out(expected, expected);
  for (long i = 0; i < expected; ++i) {
    for (long j = 0; j < expected; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return out;
}

Eigen::MatrixXd read_matrix_text(const std::filesystem::path& path) { return parse_matrix_text(read_text_file(path)); }

namespace {

void put_le(std::ostream& os, std::uint64_t x) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t get_le(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw InputError("sample file truncated");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return x;
}

}  // namespace

std::string format_matrix_text(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw InputError("matrix must be square");
  std::ostringstream out;
  out << matrix.rows() << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
      out << (j == 0 ? "" : " ") << buf;
    }
    out << "\n";
  }
  return out.str();
}

void write_samples(const std::filesystem::path& prefix, const SampleSet& samples) {
  auto bin_path = prefix;
  bin_path += ".bin";
  std::ofstream bin(bin_path, std::ios::binary | std::ios::trunc);
  if (!bin) throw InputError("cannot write " + bin_path.string());
  put_le(bin, samples.values.size());
  for (double x : samples.values) put_le(bin, std::bit_cast<std::uint64_t>(x));
  if (!bin) throw InputError("write failed for " + bin_path.string());

  Json meta = {{"seed", samples.seed},
               {"model_digest", hex_digest(samples.model_digest)},
               {"kind", to_string(samples.kind)},
               {"n_paths", samples.n_paths},
               {"count", samples.values.size()},
               {"cycles", samples.cycle_lengths.size()}};
  auto meta_path = prefix;
  meta_path += ".json";
  write_text_file(meta_path, meta.dump(2) + "\n");
}

std::vector<double> read_sample_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const auto count = get_le(in);
  std::vector<double> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(std::bit_cast<double>(get_le(in)));
  return out;
}

void write_survival_csv(const std::filesystem::path& path, const std::vector<SurvivalPoint>& curve) {
  std::ostringstream os;
  os << "w,S(w),count\n" << std::setprecision(17);
  for (const auto& p : curve) os << p.w << ',' << p.survival << ',' << p.count << '\n';
  write_text_file(path, os.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace erlangtail
