#pragma once

// File formats: model spec files, JSON reports, matrix text files, sample
// binaries with metadata sidecars, and survival CSVs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "erlangtail/models.hpp"
#include "erlangtail/pencil.hpp"
#include "erlangtail/simulator.hpp"

namespace erlangtail {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "erlangtail";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// A polynomial pencil together with the point to analyze.
struct ExplicitPencilSpec {
  std::vector<Eigen::MatrixXd> coefficients;
  double root = 0.0;
  std::optional<Eigen::VectorXd> v;
  std::optional<Eigen::VectorXd> w;
};

enum class ModelKind { continuous, discrete, explicit_pencil };

std::string to_string(ModelKind kind);

struct SpecFile {
  ModelKind model = ModelKind::continuous;
  std::optional<ContinuousModelSpec> continuous;
  std::optional<DiscreteModelSpec> discrete;
  std::optional<ExplicitPencilSpec> explicit_pencil;
};

/// Parse errors throw InputError naming the offending field (or line and
/// column for JSON syntax errors).
SpecFile spec_from_json(const Json& doc);
SpecFile read_spec_file(const std::filesystem::path& path);
SpecFile parse_spec_text(const std::string& text);

Json to_json(const TransformSpec& spec);
TransformSpec transform_from_json(const Json& node, TransformRole role, const std::string& where);

/// Canonical form: every field present, units spelled out.
Json to_json(const ContinuousModelSpec& spec);
Json to_json(const DiscreteModelSpec& spec);
Json to_json(const ExplicitPencilSpec& spec);
Json to_json(const SpecFile& spec);

/// FNV-1a 64 of the canonical JSON text.
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t model_digest(const ContinuousModelSpec& spec);
std::uint64_t model_digest(const DiscreteModelSpec& spec);
std::uint64_t model_digest(const SpecFile& spec);
std::string hex_digest(std::uint64_t digest);

Json to_json(const ValidationReport& report);
Json to_json(const TailReport& report);
Json to_json(const PoleReport& report);
Json to_json(const TailFit& fit);
Json classes_to_json(const ClassPartition& partition);

/// Report envelope: tool name and version, input digest, payload.
Json report_envelope(const std::string& command, std::uint64_t digest, Json payload);

/// First line N, then N rows of N numbers; '#' starts a comment.
Eigen::MatrixXd read_matrix_text(const std::filesystem::path& path);
Eigen::MatrixXd parse_matrix_text(const std::string& text);
std::string format_matrix_text(const Eigen::MatrixXd& matrix);

/// `<prefix>.bin`: little-endian uint64 count followed by that many float64.
/// `<prefix>.json`: seed, digest, kind, counts.
void write_samples(const std::filesystem::path& prefix, const SampleSet& samples);
std::vector<double> read_sample_binary(const std::filesystem::path& path);

void write_survival_csv(const std::filesystem::path& path, const std::vector<SurvivalPoint>& curve);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace erlangtail
