#include "ineq/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ineq::io {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << content;
  if (!out) throw input_error("write failed: " + path);
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_finite(const std::string& cell, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
      !std::isfinite(v))
    throw input_error(where + ": not a finite number: '" + cell + "'");
  return v;
}

// Fixed column list, in canonical order (covariate columns follow).
const std::vector<std::string>& fixed_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"id", "weight", "d1", "d2", "d3", "d4", "d5"};
    for (int l = 1; l <= kComponents; ++l) {
      c.push_back("lo_" + std::to_string(l));
      c.push_back("hi_" + std::to_string(l));
    }
    for (const char* name : {"total_lo", "total_hi", "finsum_lo", "finsum_hi",
                             "debt", "nded_min", "nded_max", "pays_tax", "cap"})
      c.push_back(name);
    return c;
  }();
  return cols;
}

}  // namespace

Dataset parse_households_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw input_error("household CSV: empty file");

  const auto header = split_csv_line(line);
  std::vector<int> fixed_idx(fixed_columns().size(), -1);
  // Covariate columns per component, in header order.
  std::array<std::vector<int>, kComponents> cov_idx;
  Dataset data;

  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    const std::string& name = header[c];
    bool matched = false;
    for (std::size_t f = 0; f < fixed_columns().size(); ++f)
      if (name == fixed_columns()[f]) {
        if (fixed_idx[f] != -1)
          throw input_error("household CSV: duplicate column '" + name + "'");
        fixed_idx[f] = c;
        matched = true;
        break;
      }
    if (matched) continue;
    if (name.size() >= 4 && name[0] == 'x' && name[1] >= '1' &&
        name[1] <= '0' + kComponents && name[2] == '_') {
      const int l = name[1] - '1';
      cov_idx[l].push_back(c);
      data.covariate_names[l].push_back(name.substr(3));
      continue;
    }
    throw input_error("household CSV: unknown column '" + name + "'");
  }
  for (std::size_t f = 0; f < fixed_columns().size(); ++f)
    if (fixed_idx[f] == -1)
      throw input_error("household CSV: missing column '" + fixed_columns()[f] +
                        "'");

  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw input_error("household CSV row " + std::to_string(row) + ": has " +
                        std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(header.size()));
    const std::string where = "household CSV row " + std::to_string(row);
    const auto cell = [&](int f) -> const std::string& {
      return cells[fixed_idx[f]];
    };

    Household h;
    h.id = cell(0);
    if (h.id.empty()) throw input_error(where + ": empty id");
    h.weight = parse_finite(cell(1), where + " weight");

    std::array<bool, kComponents> owned{};
    for (int l = 0; l < kComponents; ++l) {
      const std::string& d = cell(2 + l);
      if (d != "0" && d != "1")
        throw input_error(where + ": ownership flag d" + std::to_string(l + 1) +
                          " must be 0 or 1");
      owned[l] = (d == "1");
    }
    try {
      h.pattern = pattern_of(owned);
    } catch (const input_error& e) {
      throw input_error(where + ": " + e.what());
    }

    for (int l = 0; l < kComponents; ++l) {
      const std::string& lo = cell(7 + 2 * l);
      const std::string& hi = cell(8 + 2 * l);
      if (!owned[l]) {
        if (!lo.empty() || !hi.empty())
          throw input_error(where + ": bracket cells for unowned component " +
                            std::to_string(l + 1) + " must be empty");
        continue;
      }
      h.component_brackets[l].lo =
          lo.empty() ? 0.0 : parse_finite(lo, where + " lo_" + std::to_string(l + 1));
      h.component_brackets[l].hi =
          hi.empty() ? kInf : parse_finite(hi, where + " hi_" + std::to_string(l + 1));
    }

    h.total_bracket.lo =
        cell(17).empty() ? 0.0 : parse_finite(cell(17), where + " total_lo");
    h.total_bracket.hi =
        cell(18).empty() ? kInf : parse_finite(cell(18), where + " total_hi");
    if (!cell(19).empty() || !cell(20).empty()) {
      Interval fs;
      fs.lo = cell(19).empty() ? 0.0 : parse_finite(cell(19), where + " finsum_lo");
      fs.hi = cell(20).empty() ? kInf : parse_finite(cell(20), where + " finsum_hi");
      h.financial_sum_bracket = fs;
    }
    h.debt = cell(21).empty() ? 0.0 : parse_finite(cell(21), where + " debt");
    h.nded_min =
        cell(22).empty() ? 0.0 : parse_finite(cell(22), where + " nded_min");
    h.nded_max =
        cell(23).empty() ? kInf : parse_finite(cell(23), where + " nded_max");
    const std::string& tax = cell(24);
    if (tax == "1")
      h.pays_wealth_tax = true;
    else if (tax == "0")
      h.pays_wealth_tax = false;
    else if (!tax.empty())
      throw input_error(where + ": pays_tax must be 0, 1 or empty");
    h.cap = parse_finite(cell(25), where + " cap");

    for (int l = 0; l < kComponents; ++l) {
      if (!owned[l]) {
        for (int c : cov_idx[l])
          if (!cells[c].empty())
            throw input_error(where + ": covariate cells for unowned component " +
                              std::to_string(l + 1) + " must be empty");
        continue;
      }
      VecX x(1 + static_cast<Eigen::Index>(cov_idx[l].size()));
      x[0] = 1.0;  // constant-term slot
      for (std::size_t j = 0; j < cov_idx[l].size(); ++j) {
        const std::string& cv = cells[cov_idx[l][j]];
        if (cv.empty())
          throw input_error(where + ": missing covariate x" +
                            std::to_string(l + 1) + "_" +
                            data.covariate_names[l][j]);
        x[1 + static_cast<Eigen::Index>(j)] =
            parse_finite(cv, where + " covariate");
      }
      h.covariates[l] = std::move(x);
    }
    data.households.push_back(std::move(h));
  }
  return data;
}

Dataset read_households_csv(const std::string& path) {
  try {
    return parse_households_csv(read_file(path));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string households_csv(const Dataset& data) {
  std::ostringstream os;
  for (std::size_t f = 0; f < fixed_columns().size(); ++f)
    os << (f ? "," : "") << fixed_columns()[f];
  for (int l = 0; l < kComponents; ++l)
    for (const auto& name : data.covariate_names[l])
      os << ",x" << l + 1 << "_" << name;
  os << "\n";

  const auto put = [&os](double v, double unbounded_sentinel) {
    if (v != unbounded_sentinel) os << format_double(v);
  };
  for (const Household& h : data.households) {
    os << h.id << "," << format_double(h.weight);
    for (int l = 0; l < kComponents; ++l) os << "," << (h.pattern.owned[l] ? 1 : 0);
    for (int l = 0; l < kComponents; ++l) {
      os << ",";
      if (h.pattern.owned[l]) put(h.component_brackets[l].lo, -1.0);
      os << ",";
      if (h.pattern.owned[l]) put(h.component_brackets[l].hi, kInf);
    }
    os << ",";
    put(h.total_bracket.lo, 0.0);
    os << ",";
    put(h.total_bracket.hi, kInf);
    os << ",";
    if (h.financial_sum_bracket) put(h.financial_sum_bracket->lo, -1.0);
    os << ",";
    if (h.financial_sum_bracket) put(h.financial_sum_bracket->hi, kInf);
    os << ",";
    put(h.debt, 0.0);
    os << ",";
    put(h.nded_min, 0.0);
    os << ",";
    put(h.nded_max, kInf);
    os << ",";
    if (h.pays_wealth_tax) os << (*h.pays_wealth_tax ? 1 : 0);
    os << "," << format_double(h.cap);
    for (int l = 0; l < kComponents; ++l) {
      const Eigen::Index want =
          static_cast<Eigen::Index>(data.covariate_names[l].size());
      for (Eigen::Index j = 0; j < want; ++j) {
        os << ",";
        if (h.pattern.owned[l]) {
          if (h.covariates[l].size() != want + 1)
            throw internal_error("household CSV: covariate length mismatch for '" +
                                 h.id + "'");
          os << format_double(h.covariates[l][j + 1]);
        }
      }
    }
    os << "\n";
  }
  return os.str();
}

void write_households_csv(const std::string& path, const Dataset& data) {
  write_file(path, households_csv(data));
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(what + ": invalid JSON: " + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw input_error(what + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw input_error(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  const json j = parse_json(json_text, "run config");
  if (!j.is_object()) throw input_error("run config: expected a JSON object");
  reject_unknown_keys(j,
                      {"T", "B", "seed", "tax_threshold", "dwelling_rebate",
                       "indices", "alpha"},
                      "run config");
  RunConfig cfg;
  cfg.sweeps = get_or<long long>(j, "T", cfg.sweeps);
  cfg.burn_in = get_or<long long>(j, "B", cfg.burn_in);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.tax_threshold = get_or<double>(j, "tax_threshold", cfg.tax_threshold);
  cfg.dwelling_rebate = get_or<double>(j, "dwelling_rebate", cfg.dwelling_rebate);
  cfg.alpha = get_or<double>(j, "alpha", cfg.alpha);
  if (j.contains("indices")) {
    if (!j.at("indices").is_array())
      throw input_error("run config: 'indices' must be an array of names");
    for (const auto& item : j.at("indices")) {
      if (!item.is_string())
        throw input_error("run config: 'indices' entries must be strings");
      cfg.indices.push_back(IndexSpec::parse(item.get<std::string>()));
    }
  } else {
    cfg.indices = RunConfig::default_indices();
  }
  cfg.validate();
  return cfg;
}

RunConfig read_run_config(const std::string& path) {
  try {
    return parse_run_config(read_file(path));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string run_config_json(const RunConfig& cfg) {
  json j;
  j["T"] = cfg.sweeps;
  j["B"] = cfg.burn_in;
  j["seed"] = cfg.seed;
  j["tax_threshold"] = cfg.tax_threshold;
  j["dwelling_rebate"] = cfg.dwelling_rebate;
  j["alpha"] = cfg.alpha;
  json names = json::array();
  for (const auto& spec : cfg.indices) names.push_back(spec.name());
  j["indices"] = std::move(names);
  return j.dump(2) + "\n";
}

ParameterSet parse_parameter_set(const std::string& json_text) {
  const json j = parse_json(json_text, "parameter set");
  reject_unknown_keys(j, {"slopes", "intercepts", "covariances"},
                      "parameter set");
  ParameterSet p;

  const json& slopes = j.at("slopes");
  if (!slopes.is_array() || slopes.size() != kComponents)
    throw input_error("parameter set: 'slopes' must hold 5 arrays");
  for (int l = 0; l < kComponents; ++l) {
    const json& arr = slopes.at(l);
    p.slopes[l].resize(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < p.slopes[l].size(); ++i)
      p.slopes[l][i] = arr.at(static_cast<std::size_t>(i)).get<double>();
  }

  const json& inter = j.at("intercepts");
  if (!inter.is_array() || inter.size() != kPatterns)
    throw input_error("parameter set: 'intercepts' must hold 8 arrays of 5");
  for (int i = 0; i < kPatterns; ++i) {
    const json& row = inter.at(i);
    if (!row.is_array() || row.size() != kComponents)
      throw input_error("parameter set: 'intercepts' must hold 8 arrays of 5");
    for (int l = 0; l < kComponents; ++l)
      p.intercepts[i][l] = row.at(l).is_null()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : row.at(l).get<double>();
  }

  const json& covs = j.at("covariances");
  if (!covs.is_array() || covs.size() != kPatterns)
    throw input_error("parameter set: 'covariances' must hold 8 matrices");
  for (int i = 0; i < kPatterns; ++i) {
    const json& m = covs.at(i);
    const Eigen::Index n = static_cast<Eigen::Index>(m.size());
    p.covariances[i].resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const json& mrow = m.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(mrow.size()) != n)
        throw input_error("parameter set: covariance " + std::to_string(i + 1) +
                          " is not square");
      for (Eigen::Index c = 0; c < n; ++c)
        p.covariances[i](r, c) = mrow.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return p;
}

std::string parameter_set_json(const ParameterSet& params) {
  json j;
  json slopes = json::array();
  for (int l = 0; l < kComponents; ++l) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < params.slopes[l].size(); ++i)
      arr.push_back(params.slopes[l][i]);
    slopes.push_back(std::move(arr));
  }
  j["slopes"] = std::move(slopes);

  json inter = json::array();
  for (int i = 0; i < kPatterns; ++i) {
    json row = json::array();
    for (int l = 0; l < kComponents; ++l) {
      if (std::isnan(params.intercepts[i][l]))
        row.push_back(nullptr);
      else
        row.push_back(params.intercepts[i][l]);
    }
    inter.push_back(std::move(row));
  }
  j["intercepts"] = std::move(inter);

  json covs = json::array();
  for (int i = 0; i < kPatterns; ++i) {
    json m = json::array();
    for (Eigen::Index r = 0; r < params.covariances[i].rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < params.covariances[i].cols(); ++c)
        row.push_back(params.covariances[i](r, c));
      m.push_back(std::move(row));
    }
    covs.push_back(std::move(m));
  }
  j["covariances"] = std::move(covs);
  return j.dump(2) + "\n";
}

}  // namespace ineq::io
