#include "ksd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ksd/errors.hpp"

namespace ksd::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

json parse_value(const std::string& text) {
  double number = 0.0;
  if (parse_number(text, number)) return number;
  if (text.find(';') != std::string::npos) {
    json array = json::array();
    for (const auto& part : split(text, ';')) {
      if (!parse_number(part, number)) throw ArgumentError("bad number '" + part + "' in list");
      array.push_back(number);
    }
    return array;
  }
  return text;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return in;
}

int require_int(const json& spec, const char* key, const std::string& what) {
  if (!spec.contains(key)) throw ArgumentError(what + " spec needs '" + key + "'");
  const double v = spec.at(key).get<double>();
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw ArgumentError(what + " spec field '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

double number_or(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec.at(key).is_number()) throw ArgumentError(std::string("field '") + key + "' must be a number");
  return spec.at(key).get<double>();
}

Vector vector_field(const json& value, int dim, const std::string& what) {
  if (value.is_number()) return Vector::Constant(dim, value.get<double>());
  if (!value.is_array()) throw ArgumentError(what + " must be a number or array");
  if (static_cast<int>(value.size()) != dim) {
    throw ArgumentError(what + " has " + std::to_string(value.size()) + " entries, expected " +
                        std::to_string(dim));
  }
  Vector out(dim);
  for (int j = 0; j < dim; ++j) out[j] = value.at(static_cast<std::size_t>(j)).get<double>();
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

Sample parse_sample_csv(std::istream& in, bool weighted) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& field : fields) {
      double v = 0.0;
      if (!parse_number(field, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && line_number == 1) continue;  // header
      throw ArgumentError("non-numeric value on CSV line " + std::to_string(line_number));
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw ArgumentError("CSV line " + std::to_string(line_number) + " has " +
                          std::to_string(row.size()) + " columns, expected " +
                          std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ArgumentError("CSV sample has no rows");
  const std::size_t dim = weighted ? width - 1 : width;
  if (dim < 1) throw ArgumentError("weighted CSV needs at least one coordinate column");
  PointMatrix points(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  Vector weights(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    if (weighted) weights[static_cast<Eigen::Index>(i)] = rows[i][dim];
  }
  if (weighted) return Sample(std::move(points), std::move(weights));
  return Sample(std::move(points));
}

Sample read_sample_csv(const std::string& path, bool weighted) {
  auto in = open_input(path);
  return parse_sample_csv(in, weighted);
}

void write_sample_csv(std::ostream& out, const Sample& sample, bool weighted) {
  for (Eigen::Index j = 0; j < sample.dim(); ++j) out << (j ? "," : "") << "x" << j;
  if (weighted) out << ",weight";
  out << "\n";
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    for (Eigen::Index j = 0; j < sample.dim(); ++j) {
      out << (j ? "," : "") << format_double(sample.points()(i, j));
    }
    if (weighted) out << "," << format_double(sample.weights()[i]);
    out << "\n";
  }
}

Target read_logistic_csv(const std::string& path) {
  const Sample table = read_sample_csv(path, false);
  if (table.dim() < 2) throw ArgumentError("logistic CSV needs covariates and a label column");
  const PointMatrix covariates = table.points().leftCols(table.dim() - 1);
  const Vector labels = table.points().col(table.dim() - 1);
  return logistic_regression_target(covariates, labels);
}

json parse_spec_text(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) throw ArgumentError("empty " + what + " spec");
  try {
    if (t.front() == '{') return json::parse(t);
    if (t.front() == '@') {
      auto in = open_input(t.substr(1));
      return json::parse(in);
    }
  } catch (const json::exception& e) {
    throw ArgumentError("invalid " + what + " JSON: " + e.what());
  }
  json spec = json::object();
  const auto colon = t.find(':');
  spec["kind"] = t.substr(0, colon);
  if (colon != std::string::npos) {
    for (const auto& item : split(t.substr(colon + 1), ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ArgumentError("expected key=value in " + what + " spec");
      std::string key = trim(item.substr(0, eq));
      if (key == "d") key = "dim";
      spec[key] = parse_value(item.substr(eq + 1));
    }
  }
  return spec;
}

Target target_from_json(const json& spec) {
  try {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "gaussian") {
      const int dim = spec.contains("dim") ? require_int(spec, "dim", kind)
                      : spec.contains("mean") && spec["mean"].is_array()
                          ? static_cast<int>(spec["mean"].size())
                          : 1;
      if (dim < 1) throw ArgumentError("gaussian target needs dim >= 1");
      const Vector mean = spec.contains("mean") ? vector_field(spec["mean"], dim, "mean")
                                                : Vector::Zero(dim);
      return gaussian_target(mean);
    }
    if (kind == "mixture") {
      return symmetric_mixture_target(require_int(spec, "dim", kind),
                                      number_or(spec, "delta", 1.5));
    }
    if (kind == "pseudo_huber") return pseudo_huber_target(require_int(spec, "dim", kind));
    if (kind == "logistic") {
      if (spec.contains("csv")) return read_logistic_csv(spec["csv"].get<std::string>());
      const auto& cov = spec.at("covariates");
      const auto& lab = spec.at("labels");
      if (!cov.is_array() || cov.empty()) throw ArgumentError("covariates must be a nonempty array");
      PointMatrix covariates(static_cast<Eigen::Index>(cov.size()),
                             static_cast<Eigen::Index>(cov.at(0).size()));
      for (std::size_t l = 0; l < cov.size(); ++l) {
        if (cov[l].size() != cov[0].size()) throw ArgumentError("ragged covariate rows");
        for (std::size_t j = 0; j < cov[l].size(); ++j) {
          covariates(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) =
              cov[l][j].get<double>();
        }
      }
      Vector labels(static_cast<Eigen::Index>(lab.size()));
      for (std::size_t l = 0; l < lab.size(); ++l) {
        labels[static_cast<Eigen::Index>(l)] = lab[l].get<double>();
      }
      return logistic_regression_target(covariates, labels);
    }
    throw ArgumentError("unknown target kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid target spec: ") + e.what());
  }
}

Target parse_target(const std::string& text) {
  return target_from_json(parse_spec_text(text, "target"));
}

KernelSpec kernel_from_json(const json& spec) {
  try {
    const std::string kind = spec.at("kind").get<std::string>();
    KernelSpec out;
    auto read_bandwidth = [&] {
      if (!spec.contains("h")) return;
      const auto& h = spec["h"];
      if (h.is_string()) {
        if (h.get<std::string>() != "median") {
          throw ArgumentError("bandwidth must be a number or \"median\"");
        }
        out.median = true;
      } else {
        out.h = h.get<double>();
      }
    };
    if (kind == "imq") {
      out.kind = RadialKernel::Kind::kImq;
      out.c = number_or(spec, "c", 1.0);
      out.beta = number_or(spec, "beta", -0.5);
      read_bandwidth();
    } else if (kind == "gaussian") {
      out.kind = RadialKernel::Kind::kGaussian;
      read_bandwidth();
      if (!out.h) out.median = true;
    } else if (kind == "matern32") {
      out.kind = RadialKernel::Kind::kMatern32;
    } else {
      throw ArgumentError("unknown kernel kind '" + kind + "'");
    }
    // Validate parameters eagerly when no data is needed.
    if (!out.needs_points()) (void)out.resolve();
    return out;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid kernel spec: ") + e.what());
  }
}

KernelSpec parse_kernel(const std::string& text) {
  return kernel_from_json(parse_spec_text(text, "kernel"));
}

SequenceSpec sequence_from_json(const json& spec) {
  try {
    SequenceSpec out;
    out.kind = parse_sequence_kind(spec.at("kind").get<std::string>());
    out.n = require_int(spec, "n", "sequence");
    out.dim = spec.contains("dim") ? require_int(spec, "dim", "sequence") : 1;
    out.seed = spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : 0;
    out.delta = number_or(spec, "delta", 1.5);
    out.step = number_or(spec, "step", 0.1);
    if (spec.contains("target")) {
      out.target = spec["target"].is_string() ? parse_target(spec["target"].get<std::string>())
                                              : target_from_json(spec["target"]);
      out.dim = out.target->dim();
    }
    if (spec.contains("x0")) out.x0 = vector_field(spec["x0"], out.dim, "x0");
    return out;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid sequence spec: ") + e.what());
  }
}

namespace {

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

json to_json(const KsdReport& report) {
  return {{"schema", kSchemaVersion},
          {"w", vector_json(report.w)},
          {"norm", to_string(report.norm)},
          {"value", report.value},
          {"n", report.n},
          {"d", report.d},
          {"kernel", json::parse(report.kernel_json)},
          {"target", json::parse(report.target_json)},
          {"seconds", report.seconds}};
}

json to_json(const TestResult& result) {
  return {{"schema", kSchemaVersion},
          {"statistic", result.statistic},
          {"p_value", result.p_value},
          {"replicates", result.replicates},
          {"seed", result.seed}};
}

json to_json(const ReweightResult& result) {
  return {{"schema", kSchemaVersion},
          {"weights", vector_json(result.weights)},
          {"objective", result.objective},
          {"uniform_objective", result.uniform_objective},
          {"iterations", result.iterations},
          {"converged", result.converged}};
}

json to_json(const DecayFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (filled_ == columns_) throw ArgumentError("CSV row has too many cells");
  out_ << (filled_++ ? "," : "");
  if (text.find_first_of(",\"\n") == std::string::npos) {
    out_ << text;
  } else {
    out_ << '"';
    for (char c : text) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }

CsvWriter& CsvWriter::cell(long long value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw ArgumentError("CSV row has too few cells");
  out_ << "\n";
  filled_ = 0;
}

}  // namespace ksd::io
