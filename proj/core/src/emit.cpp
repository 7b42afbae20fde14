#include "tonelab/emit.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "tonelab/numeric_format.hpp"

namespace tonelab {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "' (expected table, csv or json)");
}

namespace {

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

using Rows = std::vector<std::vector<std::string>>;

void csv_rows(std::ostream& os, const std::vector<std::string>& header, const Rows& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

struct Table {
  std::vector<std::string> header;
  Rows rows;
};

Table tabulate(const TaskResult& r) {
  const json& d = r.data;
  Table t;
  if (r.task == "tone") {
    t.header = {"a", "b", "mode_k", "mode_j", "lambda", "err"};
    t.rows.push_back({cell(d["domain"]["a"]), cell(d["domain"]["b"]), cell(d["mode"]["angular"]),
                      cell(d["mode"]["fiber"]), cell(d["lambda"]), cell(d["err"])});
  } else if (r.task == "ess") {
    t.header = {"R", "R_cut", "lambda", "err"};
    for (const auto& p : d["points"])
      for (const auto& c : p["cuts"]) t.rows.push_back({cell(p["R"]), cell(c["R_cut"]), cell(c["lambda"]), cell(c["err"])});
  } else if (r.task == "certify") {
    t.header = {"R_star", "inf_driving", "bound", "verdict"};
    t.rows.push_back({cell(d["R_star"]), cell(d["inf_driving"]), cell(d["bound"]), cell(d["verdict"])});
  } else if (r.task == "compare") {
    t.header = {"hypothesis_met", "hypothesis_max_violation", "max_violation", "argmax_t", "max_abs_difference",
                "pass"};
    t.rows.push_back({cell(d["hypothesis_met"]), cell(d["hypothesis_max_violation"]), cell(d["max_violation"]),
                      cell(d["argmax_t"]), cell(d["max_abs_difference"]), cell(d["pass"])});
  } else if (r.task == "verify") {
    t.header = {"check", "max_residual", "argmax_t", "pass"};
    for (const auto& c : d["checks"])
      t.rows.push_back({cell(c["check"]), cell(c["max_residual"]), cell(c["argmax_t"]), cell(c["pass"])});
    if (d.contains("sign")) {
      for (const char* side : {"plus", "minus"}) {
        const json& c = d["sign"][side];
        t.rows.push_back({std::string("sign-") + side, cell(c["max_residual"]), cell(c["argmax_t"]), cell(c["pass"])});
      }
    }
  } else if (r.task == "brooks") {
    t.header = {"r", "mu_hat"};
    for (const auto& p : d["tail"]) t.rows.push_back({cell(p["r"]), cell(p["mu_hat"])});
  }
  return t;
}

void aligned(std::ostream& os, const Table& t) {
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    os << "  ";
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void summary(std::ostream& os, const TaskResult& r) {
  const json& d = r.data;
  auto kv = [&](const char* k, const json& v) { os << "  " << k << ": " << cell(v) << '\n'; };
  if (r.task == "ess") {
    kv("space", d["space"]);
    kv("verdict", d["verdict"]);
    kv("bottom", d["bottom"]);
    kv("bottom_err", d["bottom_err"]);
    kv("budget_exhausted", d["budget_exhausted"]);
    kv("monotone_in_R", d["monotone_in_R"]);
    if (d.contains("transfer")) {
      kv("transfer", d["transfer"]["kind"]);
      kv("transfer_statement", d["transfer"]["statement"]);
    }
  } else if (r.task == "certify") {
    kv("kind", d["kind"]);
    kv("verdict", d["verdict"]);
    kv("sup_driving", d["sup_driving"]);
    kv("horizon", d["horizon"]);
    if (!d["note"].get<std::string>().empty()) kv("note", d["note"]);
  } else if (r.task == "verify" && d.contains("sign")) {
    kv("sign", d["sign"]["sign"]);
    kv("degenerate", d["sign"]["degenerate"]);
    kv("separated", d["sign"]["separated"]);
  } else if (r.task == "brooks") {
    kv("space", d["space"]);
    kv("mu_estimate", d["mu_estimate"]);
    kv("volume_diverges", d["volume_diverges"]);
    kv("nonempty_essential_spectrum", d["nonempty_essential_spectrum"]);
    kv("upper_bound", d["upper_bound"]);
    kv("verdict", d["certificate"]["verdict"]);
  }
}

}  // namespace

std::string render_csv(const TaskResult& result) {
  if (!result.ok) return "";
  const Table t = tabulate(result);
  std::ostringstream os;
  csv_rows(os, t.header, t.rows);
  return os.str();
}

std::string render(const RunRecord& record, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::json:
      os << record_to_json(record).dump(2) << '\n';
      break;
    case OutputFormat::csv: {
      const bool single = record.results.size() == 1;
      for (std::size_t i = 0; i < record.results.size(); ++i) {
        const auto& r = record.results[i];
        if (i) os << '\n';
        if (!single || !r.ok) os << "# " << r.label << " (" << r.task << ")" << (r.ok ? "" : ": error: " + r.error) << '\n';
        os << render_csv(r);
      }
      break;
    }
    case OutputFormat::table: {
      const json& s = record.scenario;
      os << "scenario: " << cell(s.value("name", json(""))) << '\n';
      const std::string desc = s.value("description", std::string());
      if (!desc.empty()) os << "  " << desc << '\n';
      for (const auto& r : record.results) {
        os << '\n' << "== " << r.label << " (" << r.task << ") ==\n";
        if (!r.ok) {
          os << "  error: " << r.error << '\n';
          continue;
        }
        summary(os, r);
        aligned(os, tabulate(r));
      }
      if (record.wall_time_s) os << "\nwall time: " << format_double(*record.wall_time_s) << " s\n";
      break;
    }
  }
  return os.str();
}

void emit(const RunRecord& record, OutputFormat format, const std::string& path) {
  const std::string text = render(record, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace tonelab
