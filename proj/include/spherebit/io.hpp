// io.hpp -- point-set file formats, report serialization, trace output.
//
// PointSet CSV: first line "d,N", then N rows of d+1 comma-separated
// decimal floats printed with 17 significant digits (lossless for doubles).
// The JSON format carries the meta block as well.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spherebit/discrepancy.hpp"
#include "spherebit/energy.hpp"
#include "spherebit/onebit.hpp"

namespace spherebit {

// I/O failure with the 1-based line number when the problem is tied to one.
class IoError : public std::runtime_error {
 public:
  IoError(std::string message, std::int64_t line = 0)
      : std::runtime_error(std::move(message)), line_number(line) {}
  std::int64_t line_number;
};

void write_pointset_csv(const PointSet& Z, std::ostream& out);
void write_pointset_csv(const PointSet& Z, const std::filesystem::path& path);
PointSet read_pointset_csv(std::istream& in);
PointSet read_pointset_csv(const std::filesystem::path& path);

// One +-1 row per bit vector.
void write_bitvector_csv(const BitVector& bits, std::ostream& out);

nlohmann::json pointset_to_json(const PointSet& Z);
PointSet pointset_from_json(const nlohmann::json& j);
void write_pointset_json(const PointSet& Z, const std::filesystem::path& path);
PointSet read_pointset_json(const std::filesystem::path& path);

nlohmann::json meta_to_json(const PointSetMeta& meta);

// Report JSON with provenance: {family, mode, value, stderr, samples,
// seed, Z_meta} plus the witness pair when one exists.
nlohmann::json report_to_json(const DiscrepancyReport& report,
                              std::optional<std::uint64_t> seed,
                              const PointSetMeta& z_meta);

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out);
void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::filesystem::path& path);

// 17-significant-digit decimal rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace spherebit
