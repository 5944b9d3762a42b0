#include "erglab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace erglab {

using nlohmann::json;

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open " + tmp.string() +
                               " for writing");
    out << content;
    if (!out.flush())
      throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string real_or_null(double x) {
  return std::isfinite(x) ? format_real(x) : std::string("null");
}

std::string vector_json(const Vector& v) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_real(v[i]);
  }
  return out + "]";
}

json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error(std::string(what) + ": cannot open " +
                             path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string(what) + ": " + path.string() +
                             ": " + e.what());
  }
}

Vector vector_from(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ConfigError(field + "[" + std::to_string(i) + "]",
                        "expected a number");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ConfigError(field, "expected a nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ConfigError(field + "[" + std::to_string(i) + "]",
                        "expected a row of " + std::to_string(cols) +
                            " numbers");
    for (size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          j[i][k].get<double>();
  }
  return m;
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(where.empty() ? key : where + "." + key,
                      "missing required field");
  return *it;
}

std::string sub(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

Bundle bundle_from(const json& j, const std::string& where) {
  Vector lambda = vector_from(need(j, "lambda", where), sub(where, "lambda"));
  const json& fibers = need(j, "fibers", where);
  if (!fibers.is_array() || fibers.empty())
    throw ConfigError(sub(where, "fibers"),
                      "expected a nonempty array of fibers");
  std::vector<Vector> mus;
  for (size_t i = 0; i < fibers.size(); ++i) {
    const std::string fw = sub(where, "fibers[" + std::to_string(i) + "]");
    mus.push_back(vector_from(need(fibers[i], "mu", fw), sub(fw, "mu")));
  }
  try {
    return make_bundle(std::move(lambda), std::move(mus));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where.empty() ? "bundle" : where, e.what());
  }
}

BundleFunction function_from(const json& j, const std::string& where) {
  const json& values = need(j, "values", where);
  if (!values.is_array())
    throw ConfigError(sub(where, "values"), "expected an array of arrays");
  BundleFunction f;
  for (size_t i = 0; i < values.size(); ++i)
    f.values.push_back(vector_from(
        values[i], sub(where, "values[" + std::to_string(i) + "]")));
  return f;
}

WeightSequence weights_from(const json& j, const std::string& where) {
  const json& kind = need(j, "kind", where);
  if (!kind.is_string())
    throw ConfigError(sub(where, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "constant") {
    const json& v = need(j, "value", where);
    if (!v.is_number())
      throw ConfigError(sub(where, "value"), "expected a number");
    return constant_weights(v.get<double>());
  }
  if (k == "trig") {
    const json& terms = need(j, "terms", where);
    if (!terms.is_array() || terms.empty())
      throw ConfigError(sub(where, "terms"),
                        "expected a nonempty array of terms");
    std::vector<TrigTerm> parsed;
    int dim = -1;
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = sub(where, "terms[" + std::to_string(t) + "]");
      TrigTerm term;
      const json& amp = need(terms[t], "amp", tw);
      if (!amp.is_number())
        throw ConfigError(sub(tw, "amp"), "expected a number");
      term.amplitude = amp.get<double>();
      Vector freq = vector_from(need(terms[t], "freq", tw), sub(tw, "freq"));
      Vector phase =
          vector_from(need(terms[t], "phase", tw), sub(tw, "phase"));
      term.frequency.assign(freq.data(), freq.data() + freq.size());
      term.phase.assign(phase.data(), phase.data() + phase.size());
      if (dim == -1) dim = static_cast<int>(term.frequency.size());
      parsed.push_back(std::move(term));
    }
    try {
      return trig_weights(make_trig_polynomial(dim, std::move(parsed)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(sub(where, "terms"), e.what());
    }
  }
  if (k == "subsequence") {
    const json& arr = need(j, "j", where);
    if (!arr.is_array() || arr.empty())
      throw ConfigError(sub(where, "j"),
                        "expected a nonempty array of integers");
    std::vector<std::int64_t> members;
    for (const auto& x : arr) {
      if (!x.is_number_integer())
        throw ConfigError(sub(where, "j"), "expected integers");
      members.push_back(x.get<std::int64_t>());
    }
    try {
      return subsequence_to_weights(make_subsequence(std::move(members)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(sub(where, "j"), e.what());
    }
  }
  if (k == "product") {
    const json& factors = need(j, "factors", where);
    if (!factors.is_array() || factors.empty())
      throw ConfigError(sub(where, "factors"),
                        "expected a nonempty array of weight specs");
    std::vector<WeightSequence> parsed;
    for (size_t i = 0; i < factors.size(); ++i)
      parsed.push_back(weights_from(
          factors[i], sub(where, "factors[" + std::to_string(i) + "]")));
    try {
      return product_weights(std::move(parsed));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(sub(where, "factors"), e.what());
    }
  }
  if (k == "custom")
    throw ConfigError(sub(where, "kind"),
                      "custom weights exist only in code, not in files");
  throw ConfigError(sub(where, "kind"), "unknown weight kind \"" + k + "\"");
}

}  // namespace

Bundle read_bundle_file(const std::filesystem::path& path) {
  return bundle_from(parse_file(path, "bundle"), "");
}

void write_bundle_file(const std::filesystem::path& path, const Bundle& b) {
  std::string out = "{\n  \"lambda\": " + vector_json(b.base.lambda) +
                    ",\n  \"fibers\": [\n";
  for (Index w = 0; w < b.base_points(); ++w) {
    out += "    {\"mu\": " + vector_json(b.fiber(w).mu) + "}";
    out += w + 1 < b.base_points() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  atomic_write_file(path, out);
}

BundleFunction read_function_file(const std::filesystem::path& path) {
  return function_from(parse_file(path, "function"), "");
}

void write_function_file(const std::filesystem::path& path,
                         const BundleFunction& f) {
  std::string out = "{\n  \"values\": [\n";
  for (Index w = 0; w < f.base_points(); ++w) {
    out += "    " + vector_json(f.fiber(w));
    out += w + 1 < f.base_points() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  atomic_write_file(path, out);
}

std::vector<Matrix> read_operator_file(const std::filesystem::path& path) {
  const json j = parse_file(path, "operator");
  const json& ms = need(j, "matrices", "");
  if (!ms.is_array() || ms.empty())
    throw ConfigError("matrices", "expected a nonempty array of matrices");
  std::vector<Matrix> out;
  for (size_t i = 0; i < ms.size(); ++i)
    out.push_back(matrix_from(ms[i], "matrices[" + std::to_string(i) + "]"));
  return out;
}

void write_operator_file(const std::filesystem::path& path,
                         const std::vector<Matrix>& matrices) {
  std::string out = "{\n  \"matrices\": [\n";
  for (size_t m = 0; m < matrices.size(); ++m) {
    out += "    [\n";
    for (Index i = 0; i < matrices[m].rows(); ++i) {
      out += "      " + vector_json(matrices[m].row(i).transpose());
      out += i + 1 < matrices[m].rows() ? ",\n" : "\n";
    }
    out += "    ]";
    out += m + 1 < matrices.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  atomic_write_file(path, out);
}

std::vector<std::vector<std::vector<Index>>> read_partition_file(
    const std::filesystem::path& path) {
  const json j = parse_file(path, "partition");
  const json& bs = need(j, "blocks", "");
  if (!bs.is_array())
    throw ConfigError("blocks", "expected an array per base point");
  std::vector<std::vector<std::vector<Index>>> out;
  for (size_t w = 0; w < bs.size(); ++w) {
    if (!bs[w].is_array())
      throw ConfigError("blocks[" + std::to_string(w) + "]",
                        "expected an array of blocks");
    std::vector<std::vector<Index>> fiber_blocks;
    for (size_t b = 0; b < bs[w].size(); ++b) {
      if (!bs[w][b].is_array())
        throw ConfigError("blocks[" + std::to_string(w) + "][" +
                              std::to_string(b) + "]",
                          "expected an array of atom indices");
      std::vector<Index> block;
      for (const auto& a : bs[w][b]) {
        if (!a.is_number_integer())
          throw ConfigError("blocks", "atom indices must be integers");
        block.push_back(a.get<Index>());
      }
      fiber_blocks.push_back(std::move(block));
    }
    out.push_back(std::move(fiber_blocks));
  }
  return out;
}

void write_partition_file(
    const std::filesystem::path& path,
    const std::vector<std::vector<std::vector<Index>>>& blocks) {
  std::string out = "{\n  \"blocks\": [\n";
  for (size_t w = 0; w < blocks.size(); ++w) {
    out += "    [";
    for (size_t b = 0; b < blocks[w].size(); ++b) {
      if (b) out += ", ";
      out += "[";
      for (size_t a = 0; a < blocks[w][b].size(); ++a) {
        if (a) out += ", ";
        out += std::to_string(blocks[w][b][a]);
      }
      out += "]";
    }
    out += "]";
    out += w + 1 < blocks.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  atomic_write_file(path, out);
}

WeightSequence read_weights_file(const std::filesystem::path& path) {
  return weights_from(parse_file(path, "weights"), "");
}

std::string weights_to_json(const WeightSequence& w) {
  switch (w.kind) {
    case WeightKind::constant:
      return "{\"kind\": \"constant\", \"value\": " +
             format_real(w.constant_value) + "}";
    case WeightKind::trig: {
      std::string out = "{\"kind\": \"trig\", \"terms\": [";
      for (size_t t = 0; t < w.poly.terms.size(); ++t) {
        const TrigTerm& term = w.poly.terms[t];
        if (t) out += ", ";
        out += "{\"amp\": " + format_real(term.amplitude) + ", \"freq\": [";
        for (size_t i = 0; i < term.frequency.size(); ++i) {
          if (i) out += ", ";
          out += format_real(term.frequency[i]);
        }
        out += "], \"phase\": [";
        for (size_t i = 0; i < term.phase.size(); ++i) {
          if (i) out += ", ";
          out += format_real(term.phase[i]);
        }
        out += "]}";
      }
      return out + "]}";
    }
    case WeightKind::subsequence: {
      std::string out = "{\"kind\": \"subsequence\", \"j\": [";
      for (size_t i = 0; i < w.members.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(w.members[i]);
      }
      return out + "]}";
    }
    case WeightKind::product: {
      std::string out = "{\"kind\": \"product\", \"factors\": [";
      for (size_t i = 0; i < w.factors.size(); ++i) {
        if (i) out += ", ";
        out += weights_to_json(w.factors[i]);
      }
      return out + "]}";
    }
    case WeightKind::custom:
      throw std::invalid_argument("custom weights cannot be serialized");
  }
  throw std::invalid_argument("weights_to_json: unknown kind");
}

void write_weights_file(const std::filesystem::path& path,
                        const WeightSequence& w) {
  atomic_write_file(path, weights_to_json(w) + "\n");
}

// ---- experiment config ----------------------------------------------------

namespace {

const char* kKnownTop[] = {"seed",     "p",         "bundle",
                           "operator", "operators", "weights",
                           "horizons", "checks",    "instances",
                           "function", "tail_threshold", "ratio_tol",
                           "out"};

OperatorSpec operator_spec_from(const json& j, const std::string& where,
                                const std::filesystem::path& dir) {
  const json& kind = need(j, "kind", where);
  if (!kind.is_string())
    throw ConfigError(sub(where, "kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  OperatorSpec spec;
  if (k == "identity") {
    spec.kind = OperatorKind::identity;
  } else if (k == "cyclic") {
    spec.kind = OperatorKind::cyclic;
  } else if (k == "random_markov") {
    spec.kind = OperatorKind::random_markov;
  } else if (k == "random_strict") {
    spec.kind = OperatorKind::random_strict;
  } else if (k == "custom") {
    spec.custom = true;
    if (j.contains("matrices")) {
      const json& ms = j["matrices"];
      if (!ms.is_array() || ms.empty())
        throw ConfigError(sub(where, "matrices"),
                          "expected a nonempty array of matrices");
      for (size_t i = 0; i < ms.size(); ++i)
        spec.matrices.push_back(matrix_from(
            ms[i], sub(where, "matrices[" + std::to_string(i) + "]")));
    } else if (j.contains("path")) {
      if (!j["path"].is_string())
        throw ConfigError(sub(where, "path"), "expected a string");
      try {
        spec.matrices = read_operator_file(dir / j["path"].get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(sub(where, "path"), e.what());
      }
    } else {
      throw ConfigError(where, "custom operator needs matrices or path");
    }
  } else {
    throw ConfigError(sub(where, "kind"),
                      "unknown operator kind \"" + k + "\"");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  json j;
  try {
    j = parse_file(path, "config");
  } catch (const std::runtime_error& e) {
    throw ConfigError("<config>", e.what());
  }
  if (!j.is_object()) throw ConfigError("<config>", "expected a JSON object");
  const std::filesystem::path dir = path.parent_path();

  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownTop) known = known || it.key() == k;
    if (!known)
      throw ConfigError(it.key(), "unknown config field");
  }

  ExperimentConfig cfg;

  const json& seed = need(j, "seed", "");
  if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
    throw ConfigError("seed", "expected a nonnegative integer");
  cfg.seed = seed.get<std::uint64_t>();

  const json& p = need(j, "p", "");
  if (!p.is_number() || !(p.get<double>() >= 1.0))
    throw ConfigError("p", "expected a number >= 1");
  cfg.p = p.get<double>();

  const json& bundle = need(j, "bundle", "");
  if (bundle.is_string()) {
    try {
      cfg.bundle = read_bundle_file(dir / bundle.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError("bundle", e.what());
    }
  } else {
    cfg.bundle = bundle_from(bundle, "bundle");
  }

  if (j.contains("operators")) {
    const json& ops = j["operators"];
    if (!ops.is_array() || ops.empty())
      throw ConfigError("operators", "expected a nonempty array");
    for (size_t i = 0; i < ops.size(); ++i)
      cfg.operators.push_back(operator_spec_from(
          ops[i], "operators[" + std::to_string(i) + "]", dir));
  } else if (j.contains("operator")) {
    cfg.operators.push_back(operator_spec_from(j["operator"], "operator",
                                               dir));
  } else {
    throw ConfigError("operators", "missing required field");
  }

  if (j.contains("weights")) {
    const json& w = j["weights"];
    WeightSequence parsed =
        w.is_string() ? read_weights_file(dir / w.get<std::string>())
                      : weights_from(w, "weights");
    if (parsed.kind == WeightKind::subsequence)
      cfg.subseq = make_subsequence(parsed.members);
    cfg.weights = std::move(parsed);
  }

  if (j.contains("horizons")) {
    const json& h = j["horizons"];
    const json& kind = need(h, "kind", "horizons");
    if (!kind.is_string())
      throw ConfigError("horizons.kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "dyadic") {
      const json& mx = need(h, "max", "horizons");
      if (!mx.is_number_integer() || mx.get<std::int64_t>() < 2)
        throw ConfigError("horizons.max", "expected an integer >= 2");
      cfg.horizons.dyadic = true;
      cfg.horizons.max = mx.get<std::int64_t>();
    } else if (k == "list") {
      const json& vals = need(h, "values", "horizons");
      if (!vals.is_array() || vals.empty())
        throw ConfigError("horizons.values", "expected a nonempty array");
      cfg.horizons.dyadic = false;
      for (const auto& v : vals) {
        std::vector<std::int64_t> entry;
        if (v.is_number_integer()) {
          entry.push_back(v.get<std::int64_t>());
        } else if (v.is_array()) {
          for (const auto& c : v) {
            if (!c.is_number_integer())
              throw ConfigError("horizons.values", "expected integers");
            entry.push_back(c.get<std::int64_t>());
          }
        } else {
          throw ConfigError("horizons.values",
                            "entries must be integers or integer arrays");
        }
        cfg.horizons.list.push_back(std::move(entry));
      }
    } else {
      throw ConfigError("horizons.kind", "expected \"dyadic\" or \"list\"");
    }
  }

  if (j.contains("checks")) {
    const json& checks = j["checks"];
    if (!checks.is_array())
      throw ConfigError("checks", "expected an array of check names");
    for (const auto& c : checks) {
      if (!c.is_string())
        throw ConfigError("checks", "check names must be strings");
      cfg.checks.push_back(c.get<std::string>());
    }
  }

  if (j.contains("instances")) {
    const json& inst = j["instances"];
    if (!inst.is_number_integer() || inst.get<std::int64_t>() < 1)
      throw ConfigError("instances", "expected an integer >= 1");
    cfg.instances = static_cast<int>(inst.get<std::int64_t>());
  }

  if (j.contains("tail_threshold")) {
    const json& t = j["tail_threshold"];
    if (!t.is_number() || !(t.get<double>() > 0.0))
      throw ConfigError("tail_threshold", "expected a positive number");
    cfg.tail_threshold = t.get<double>();
  }

  if (j.contains("ratio_tol")) {
    const json& t = j["ratio_tol"];
    if (!t.is_number() || !(t.get<double>() >= 0.0))
      throw ConfigError("ratio_tol", "expected a nonnegative number");
    cfg.ratio_tol = t.get<double>();
  }

  if (j.contains("function")) {
    const json& f = j["function"];
    BundleFunction parsed =
        f.is_string() ? read_function_file(dir / f.get<std::string>())
                      : function_from(f, "function");
    if (!shaped_like(cfg.bundle, parsed))
      throw ConfigError("function", "shape does not match the bundle");
    cfg.function = std::move(parsed);
  }

  if (j.contains("out")) {
    if (!j["out"].is_string())
      throw ConfigError("out", "expected a string");
    cfg.out_dir = j["out"].get<std::string>();
  }

  return cfg;
}

// ---- result writers ---------------------------------------------------

void write_verdicts_file(const std::filesystem::path& path,
                         const std::vector<VerdictRecord>& records) {
  std::string out = "[\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const TheoremVerdict& v = records[i].verdict;
    out += "  {\n";
    out += "    \"check\": \"" + json_escape(v.check) + "\",\n";
    out += std::string("    \"pass\": ") + (v.pass ? "true" : "false") +
           ",\n";
    out += std::string("    \"refused\": ") +
           (v.refused ? "true" : "false") + ",\n";
    out += "    \"max_ratio\": " + real_or_null(v.max_ratio) + ",\n";
    out += "    \"tail_dev\": " + real_or_null(v.tail_dev) + ",\n";
    out += "    \"seed\": " + std::to_string(v.seed) + ",\n";
    out += "    \"instances\": " + std::to_string(records[i].instances) +
           ",\n";
    out += std::string("    \"oracle_flagged\": ") +
           (v.oracle_flagged ? "true" : "false") + ",\n";
    out += "    \"reason\": \"" + json_escape(v.reason) + "\"\n";
    out += i + 1 < records.size() ? "  },\n" : "  }\n";
  }
  out += "]\n";
  atomic_write_file(path, out);
}

void write_trace_csv(const std::filesystem::path& path,
                     const AverageTrace& trace) {
  if (trace.horizons.empty())
    throw std::invalid_argument("write_trace_csv: empty trace");
  const int d = trace.horizons[0].dim();
  std::string out;
  if (d == 1) {
    out = "horizon";
  } else {
    for (int i = 0; i < d; ++i) {
      if (i) out += ",";
      out += "n" + std::to_string(i + 1);
    }
  }
  out += ",base_point,norm_p_of_average,norm_p_of_running_max,bound_rhs,"
         "ratio\n";

  for (size_t h = 0; h < trace.horizons.size(); ++h) {
    const Index B = trace.rhs.values.size();
    for (Index w = 0; w < B; ++w) {
      for (int i = 0; i < d; ++i) {
        if (i) out += ",";
        out += std::to_string(trace.horizons[h].n[static_cast<size_t>(i)]);
      }
      const double lhs = trace.running_max_norms[h].values[w];
      const double rhs = trace.rhs.values[w];
      double ratio;
      if (rhs > 0.0)
        ratio = lhs / rhs;
      else
        ratio = lhs <= 1e-300 ? 0.0 : std::numeric_limits<double>::infinity();
      out += "," + std::to_string(w);
      out += "," + format_real(trace.average_norms[h].values[w]);
      out += "," + format_real(lhs);
      out += "," + format_real(rhs);
      out += "," + format_real(ratio);
      out += "\n";
    }
  }
  atomic_write_file(path, out);
}

void write_validation_file(const std::filesystem::path& path,
                           const std::vector<OperatorValidation>& reports) {
  std::string out = "[\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    const OperatorValidation& r = reports[i];
    out += "  {\n";
    out += "    \"operator\": " + std::to_string(i) + ",\n";
    out += "    \"p\": " + format_real(r.p) + ",\n";
    out += std::string("    \"ds_valid\": ") +
           (r.ds_valid ? "true" : "false") + ",\n";
    out += std::string("    \"p_only_valid\": ") +
           (r.p_only_valid ? "true" : "false") + ",\n";
    out += "    \"fibers\": [";
    for (size_t w = 0; w < r.fiber_nonnegative.size(); ++w) {
      if (w) out += ", ";
      out += std::string("{\"nonnegative\": ") +
             (r.fiber_nonnegative[w] ? "true" : "false") +
             ", \"row_sums\": " + (r.fiber_row_sums[w] ? "true" : "false") +
             ", \"column_sums\": " +
             (r.fiber_column_sums[w] ? "true" : "false") + "}";
    }
    out += "],\n";
    out += "    \"norm_probe\": " + vector_json(r.norm_probe) + "\n";
    out += i + 1 < reports.size() ? "  },\n" : "  }\n";
  }
  out += "]\n";
  atomic_write_file(path, out);
}

void write_summary_file(const std::filesystem::path& path,
                        const std::vector<VerdictRecord>& records) {
  bool all = true;
  for (const VerdictRecord& r : records)
    all = all && r.verdict.pass && !r.verdict.refused;
  std::string out = "{\n  \"pass\": ";
  out += all ? "true" : "false";
  out += ",\n  \"checks\": [";
  for (size_t i = 0; i < records.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + json_escape(records[i].verdict.check) + "\"";
  }
  out += "]\n}\n";
  atomic_write_file(path, out);
}

}  // namespace erglab
