#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tangle/certify.hpp"
#include "tangle/fixed_points.hpp"
#include "tangle/homoclinic.hpp"
#include "tangle/manifolds.hpp"
#include "tangle/survival.hpp"
#include "tangle/tangency.hpp"
#include "tangle/validate.hpp"

namespace tangle {

/// FNV-1a of the canonical config text; stamped into output headers.
std::uint64_t fnv1a(const std::string& text);

/// Writes via a temp file + rename so partial outputs are never left behind.
void atomic_write(const std::string& path, const std::string& content);

/// "# tangle <version> config=<hash hex>" line prefixed to every artifact.
std::string artifact_header(std::uint64_t config_hash);

std::string format_double(double v);  // round-trip precision, locale-free

// CSV serializers (include the artifact header comment).
std::string to_csv(const EscapeGrid& g, std::uint64_t config_hash);
std::string to_csv(const OrbitTrace& t, std::uint64_t config_hash);
std::string to_csv(const ScanResult& s, std::uint64_t config_hash);
std::string to_csv(const std::vector<FixedPointRecord>& recs, std::uint64_t config_hash);
std::string to_csv(const CurveSample& c, std::uint64_t config_hash);
std::string to_csv(const HomoclinicOrbitData& orbit, std::uint64_t config_hash);
std::string points_csv(const std::vector<PhasePoint>& pts, std::uint64_t config_hash);

// JSON serializers.
nlohmann::json to_json(const MapParams& p);
nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const TangencyReport& r);
nlohmann::json to_json(const FixedPointRecord& r);
nlohmann::json to_json(const RegimeReport& r);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const DerivedConstants& c);

/// MapParams as CLI config text (key = value lines).
std::string to_config_text(const MapParams& p);

}  // namespace tangle
