#include "spherebit/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spherebit {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pointset_csv(const PointSet& Z, std::ostream& out) {
  out << Z.dim() << "," << Z.size() << "\n";
  const auto width = static_cast<std::size_t>(Z.dim()) + 1;
  for (std::int64_t k = 0; k < Z.size(); ++k) {
    const auto p = Z.point(k);
    for (std::size_t i = 0; i < width; ++i) {
      if (i) out << ",";
      out << format_double(p[i]);
    }
    out << "\n";
  }
}

void write_pointset_csv(const PointSet& Z, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_pointset_csv(Z, out);
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::vector<double> parse_row(const std::string& line, std::int64_t line_no) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string tok = line.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      // allow trailing whitespace only
      for (std::size_t i = used; i < tok.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(tok[i])))
          throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw IoError("line " + std::to_string(line_no) +
                        ": cannot parse number '" + tok + "'",
                    line_no);
    }
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return vals;
}

}  // namespace

PointSet read_pointset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw IoError("line 1: missing header 'd,N'", 1);
  int d = 0;
  std::int64_t n = 0;
  {
    std::istringstream hs(line);
    char comma = 0;
    if (!(hs >> d >> comma >> n) || comma != ',')
      throw IoError("line 1: header must be 'd,N'", 1);
  }
  if (d < 1) throw IoError("line 1: requires d >= 1", 1);
  if (n < 1) throw IoError("line 1: requires N >= 1", 1);

  const auto width = static_cast<std::size_t>(d) + 1;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * width);
  for (std::int64_t row = 0; row < n; ++row) {
    const std::int64_t line_no = row + 2;
    if (!std::getline(in, line))
      throw IoError("line " + std::to_string(line_no) + ": unexpected end of file",
                    line_no);
    const std::vector<double> vals = parse_row(line, line_no);
    if (vals.size() != width)
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " values, got " +
                        std::to_string(vals.size()),
                    line_no);
    flat.insert(flat.end(), vals.begin(), vals.end());
  }
  PointSetMeta meta;
  meta.method = PointSetMeta::Method::file;
  try {
    return PointSet(d, std::move(flat), std::move(meta));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid point data: ") + e.what());
  }
}

PointSet read_pointset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return read_pointset_csv(in);
}

void write_bitvector_csv(const BitVector& bits, std::ostream& out) {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) out << ",";
    out << static_cast<int>(bits.signs[i]);
  }
  out << "\n";
}

nlohmann::json meta_to_json(const PointSetMeta& meta) {
  nlohmann::json j;
  j["method"] = to_string(meta.method);
  j["seed"] = meta.seed ? nlohmann::json(*meta.seed) : nlohmann::json();
  j["partition_N"] =
      meta.partition_cells ? nlohmann::json(*meta.partition_cells) : nlohmann::json();
  return j;
}

nlohmann::json pointset_to_json(const PointSet& Z) {
  nlohmann::json j;
  j["d"] = Z.dim();
  j["N"] = Z.size();
  j["meta"] = meta_to_json(Z.meta());
  nlohmann::json pts = nlohmann::json::array();
  for (std::int64_t k = 0; k < Z.size(); ++k) {
    const auto p = Z.point(k);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  j["points"] = std::move(pts);
  return j;
}

PointSet pointset_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const auto pts = j.at("points");
  std::vector<double> flat;
  for (const auto& row : pts) {
    const auto vals = row.get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != d + 1)
      throw IoError("point row has wrong width");
    flat.insert(flat.end(), vals.begin(), vals.end());
  }
  PointSetMeta meta;
  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    meta.method = method_from_string(m.value("method", "file"));
    if (m.contains("seed") && !m.at("seed").is_null())
      meta.seed = m.at("seed").get<std::uint64_t>();
    if (m.contains("partition_N") && !m.at("partition_N").is_null())
      meta.partition_cells = m.at("partition_N").get<std::int64_t>();
  }
  return PointSet(d, std::move(flat), std::move(meta));
}

void write_pointset_json(const PointSet& Z, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << pointset_to_json(Z).dump(2) << "\n";
}

PointSet read_pointset_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
  return pointset_from_json(j);
}

nlohmann::json report_to_json(const DiscrepancyReport& report,
                              std::optional<std::uint64_t> seed,
                              const PointSetMeta& z_meta) {
  nlohmann::json j;
  j["family"] = to_string(report.family);
  j["mode"] = to_string(report.mode);
  j["value"] = report.value;
  j["stderr"] = report.std_error ? nlohmann::json(*report.std_error)
                                 : nlohmann::json();
  j["samples"] =
      report.samples ? nlohmann::json(*report.samples) : nlohmann::json();
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json();
  j["Z_meta"] = meta_to_json(z_meta);
  if (report.witness) {
    j["witness"] = {{"x", report.witness->first.coords()},
                    {"y", report.witness->second.coords()}};
  }
  return j;
}

void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& out) {
  out << "step,energy,grad_norm,step_size\n";
  for (const TraceRow& row : trace)
    out << row.step << "," << format_double(row.energy) << ","
        << format_double(row.grad_norm) << "," << format_double(row.step_size)
        << "\n";
}

void write_trace_csv(const std::vector<TraceRow>& trace,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_trace_csv(trace, out);
}

}  // namespace spherebit
