#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dtnmap/dtn.hpp"

namespace dtn::app {

inline constexpr const char* kVersion = "1.0.0";

enum class Mode { solve, verify, kernel_dump, residual };

// A symbolic data family with analytic derivative. Envelopes are set only for
// families that decay on x >= 0.
struct DataFamily {
    std::string name;
    ComplexFunction value;
    ComplexFunction derivative;
    std::optional<DecayEnvelope> value_envelope;
    std::optional<DecayEnvelope> derivative_envelope;
};

// Families: polynomial, exp_poly, gaussian, boosted_gaussian.
DataFamily parse_family(const nlohmann::json& spec);

struct RunConfig {
    nlohmann::json source;
    std::string hash;  // FNV-1a of the canonical config text
    BoundaryCurve curve;
    int N = 0;
    double grading = 1.0;
    std::optional<ManufacturedSolution> manufactured;
    DtnProblem problem;
    DtnOptions options;
    std::vector<cplx> residual_k;
    std::string output_dir = ".";

    double final_time() const { return curve.final_time(); }
    TimeGrid grid() const;
};

// ConfigError on schema violations; curve constraints raise ConstraintViolation.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

std::string fnv1a_hex(const std::string& text);

// Writes the mode's artefact into config.output_dir and returns its path.
std::string execute(Mode mode, const RunConfig& config);

// Command line: <solve|verify|kernel-dump|residual> <config.json> [--output-dir DIR].
// Exit 0 on success, 1 on configuration errors, 2 on numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dtn::app
