#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rellich/cli.hpp"

namespace rellich::cli {

using json = nlohmann::ordered_json;

namespace {

json number_or_null(const std::optional<double>& x) {
  if (x && std::isfinite(*x)) return *x;
  return nullptr;
}

// JSON has no infinities; non-finite values are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_num(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw UsageError(std::string("report: missing field '") + key + "'");
  if (it->is_null()) return std::nan("");
  if (!it->is_number()) throw UsageError(std::string("report: field '") + key + "' is not a number");
  return it->get<double>();
}

std::string read_str(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw UsageError(std::string("report: missing string field '") + key + "'");
  return it->get<std::string>();
}

json extra_of(const json& row, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (auto it = row.begin(); it != row.end(); ++it) {
    bool k = false;
    for (const char* name : known) k = k || it.key() == name;
    if (!k) extra[it.key()] = it.value();
  }
  return extra;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_num(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string format_report(const Report& r, Format f) {
  if (f == Format::csv) {
    std::ostringstream os;
    os << "id,params,lhs,rhs,margin,budget\n";
    for (const auto& t : r.tests)
      os << csv_field(t.id) << ',' << csv_field(t.params.dump()) << ',' << csv_num(t.lhs) << ',' << csv_num(t.rhs)
         << ',' << csv_num(t.margin) << ',' << csv_num(t.budget) << '\n';
    return os.str();
  }
  json j;
  j["command"] = r.command;
  j["config"] = r.config;
  j["space_form"] = {{"n", r.n}, {"kappa", r.kappa}, {"R", number_or_null(r.R)}};
  j["scans"] = json::array();
  for (const auto& s : r.scans) {
    json row = {{"target", s.target},
                {"verdict", s.verdict},
                {"min", num(s.min)},
                {"argmin", num(s.argmin)},
                {"boundary_limit_R", number_or_null(s.boundary_limit_R)}};
    for (auto it = s.extra.begin(); it != s.extra.end(); ++it) row[it.key()] = it.value();
    j["scans"].push_back(row);
  }
  j["tests"] = json::array();
  for (const auto& t : r.tests) {
    json row = {{"id", t.id},
                {"params", t.params},
                {"lhs", num(t.lhs)},
                {"rhs", num(t.rhs)},
                {"margin", num(t.margin)},
                {"budget", num(t.budget)}};
    for (auto it = t.extra.begin(); it != t.extra.end(); ++it) row[it.key()] = it.value();
    j["tests"].push_back(row);
  }
  j["verdict"] = r.verdict;
  j["seed"] = r.seed;
  j["timestamp"] = r.timestamp;
  j["case_id"] = r.case_id;
  j["notes"] = r.notes;
  j["details"] = r.details;
  return j.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("report: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("report: top level is not an object");
  try {
    Report r;
    r.command = read_str(j, "command");
    r.config = j.at("config");
    const json& sf = j.at("space_form");
    r.n = sf.at("n").get<int>();
    r.kappa = sf.at("kappa").get<double>();
    if (!sf.at("R").is_null()) r.R = sf.at("R").get<double>();
    for (const auto& s : j.at("scans")) {
      ScanRow row;
      row.target = read_str(s, "target");
      row.verdict = read_str(s, "verdict");
      row.min = read_num(s, "min");
      row.argmin = read_num(s, "argmin");
      if (!s.at("boundary_limit_R").is_null()) row.boundary_limit_R = s.at("boundary_limit_R").get<double>();
      row.extra = extra_of(s, {"target", "verdict", "min", "argmin", "boundary_limit_R"});
      r.scans.push_back(std::move(row));
    }
    for (const auto& t : j.at("tests")) {
      TestRow row;
      row.id = read_str(t, "id");
      row.params = t.at("params");
      row.lhs = read_num(t, "lhs");
      row.rhs = read_num(t, "rhs");
      row.margin = read_num(t, "margin");
      row.budget = read_num(t, "budget");
      row.extra = extra_of(t, {"id", "params", "lhs", "rhs", "margin", "budget"});
      r.tests.push_back(std::move(row));
    }
    r.verdict = read_str(j, "verdict");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.timestamp = read_str(j, "timestamp");
    r.case_id = j.value("case_id", "");
    if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("details")) r.details = j.at("details");
    return r;
  } catch (const json::exception& e) {
    throw UsageError(std::string("report: ") + e.what());
  }
}

int exit_code(const Report& r) {
  if (r.verdict == "pass") return kExitPass;
  if (r.verdict == "fail") return kExitFail;
  return kExitInconclusive;
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path);
  }
}

}  // namespace rellich::cli
