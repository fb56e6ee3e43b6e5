#include "eigenvi/harness/records.hpp"

#include <stdexcept>

#include "eigenvi/harness/csv.hpp"

namespace eigenvi::harness {

namespace {

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad count '" + s + "'");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("bad boolean '" + s + "'");
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<std::string> record_header() {
  return {"config_hash",  "cell",          "target",       "family",         "orders",
          "K",            "B",             "standardized", "score_cache_reused", "status",
          "lambda_min",   "forward_kl",    "forward_kl_stderr", "kl_excluded",   "fisher",
          "fisher_stderr", "fisher_excluded", "tail_clips", "rejected",       "score_evaluations",
          "note"};
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  CsvWriter w(out);
  w.row(record_header());
  for (const auto& r : records) {
    w.row({r.config_hash, std::to_string(r.cell), r.target, r.family, r.orders,
           std::to_string(r.basis_size), std::to_string(r.batch_size), bool_text(r.standardized),
           bool_text(r.score_cache_reused), r.status, format_optional(r.lambda_min),
           format_optional(r.forward_kl), format_optional(r.forward_kl_stderr),
           std::to_string(r.kl_excluded), format_optional(r.fisher), format_optional(r.fisher_stderr),
           std::to_string(r.fisher_excluded), std::to_string(r.tail_clips), std::to_string(r.rejected),
           std::to_string(r.score_evaluations), r.note});
  }
}

std::vector<RunRecord> read_records(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != record_header()) {
    throw std::invalid_argument("records file does not start with the expected header");
  }
  std::vector<RunRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != record_header().size()) {
      throw std::invalid_argument("records row " + std::to_string(i) + " has the wrong field count");
    }
    RunRecord r;
    r.config_hash = f[0];
    r.cell = std::stoi(f[1]);
    r.target = f[2];
    r.family = f[3];
    r.orders = f[4];
    r.basis_size = std::stoi(f[5]);
    r.batch_size = parse_count(f[6]);
    r.standardized = parse_bool(f[7]);
    r.score_cache_reused = parse_bool(f[8]);
    r.status = f[9];
    r.lambda_min = parse_optional(f[10]);
    r.forward_kl = parse_optional(f[11]);
    r.forward_kl_stderr = parse_optional(f[12]);
    r.kl_excluded = parse_count(f[13]);
    r.fisher = parse_optional(f[14]);
    r.fisher_stderr = parse_optional(f[15]);
    r.fisher_excluded = parse_count(f[16]);
    r.tail_clips = parse_count(f[17]);
    r.rejected = parse_count(f[18]);
    r.score_evaluations = parse_count(f[19]);
    r.note = f[20];
    out.push_back(std::move(r));
  }
  return out;
}

void write_long(std::ostream& out, const std::vector<RunRecord>& records) {
  CsvWriter w(out);
  w.row({"config_hash", "cell", "target", "family", "K", "B", "metric", "value"});
  for (const auto& r : records) {
    auto emit = [&](const char* metric, const std::optional<double>& v) {
      if (!v) return;
      w.row({r.config_hash, std::to_string(r.cell), r.target, r.family, std::to_string(r.basis_size),
             std::to_string(r.batch_size), metric, format_double(*v)});
    };
    emit("lambda_min", r.lambda_min);
    emit("forward_kl", r.forward_kl);
    emit("forward_kl_stderr", r.forward_kl_stderr);
    emit("fisher", r.fisher);
    emit("fisher_stderr", r.fisher_stderr);
    if (r.status == "ok") emit("tail_clips", static_cast<double>(r.tail_clips));
  }
}

void write_timings(std::ostream& out, const std::vector<TimingRecord>& timings) {
  CsvWriter w(out);
  w.row({"config_hash", "cell", "K", "B", "score_ms", "assembly_ms", "eigensolve_ms", "metrics_ms"});
  for (const auto& t : timings) {
    w.row({t.config_hash, std::to_string(t.cell), std::to_string(t.basis_size),
           std::to_string(t.batch_size), format_double(t.score_ms), format_double(t.assembly_ms),
           format_double(t.eigensolve_ms), format_double(t.metrics_ms)});
  }
}

}  // namespace eigenvi::harness
