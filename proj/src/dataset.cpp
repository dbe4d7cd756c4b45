#include "spider/dataset.hpp"

#include "spider/error.hpp"
#include "spider/numfmt.hpp"
#include "spider/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace spider {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// RFC 4180 field splitting for a single physical line.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted)
        throw ParseError("line " + std::to_string(line_no) + ": stray quote");
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<ParameterSpec> fit_specs(const Eigen::MatrixXd& inputs,
                                     const std::vector<std::string>& names) {
  std::vector<ParameterSpec> specs;
  for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
    ParameterSpec spec;
    spec.name = names.at(static_cast<std::size_t>(j));
    if (inputs.rows() > 0) {
      spec.lower = inputs.col(j).minCoeff();
      spec.upper = inputs.col(j).maxCoeff();
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array()) throw ParseError(std::string(what) + " must be an array of arrays");
  const auto n = rows.size();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  if (!rows[0].is_array()) throw ParseError(std::string(what) + " must be an array of arrays");
  const auto cols = rows[0].size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) throw ParseError(std::string(what) + " row is not an array");
    if (row.size() != cols)
      throw ValidationError(std::string(what) + ": ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number())
        throw ParseError(std::string(what) + ": non-numeric entry at row " + std::to_string(i));
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ensemble

Ensemble Ensemble::create(Eigen::MatrixXd inputs, std::vector<ParameterSpec> input_specs,
                          Eigen::MatrixXd outputs, Eigen::VectorXd coordinate,
                          std::vector<std::string> labels) {
  const auto n = outputs.rows();
  const auto m = outputs.cols();
  if (n < 3)
    throw ValidationError("N < 3: an ensemble needs at least 3 realizations, got " +
                          std::to_string(n));
  if (m < 1) throw ValidationError("outputs have no columns");
  if (!all_finite(outputs)) throw ValidationError("non-finite value in outputs");
  if (coordinate.size() != m)
    throw ValidationError("coordinate length " + std::to_string(coordinate.size()) +
                          " does not match output length " + std::to_string(m));
  if (!coordinate.allFinite()) throw ValidationError("non-finite coordinate");
  for (Eigen::Index k = 1; k < m; ++k)
    if (!(coordinate[k] > coordinate[k - 1]))
      throw ValidationError("coordinate is not strictly increasing at index " +
                            std::to_string(k));

  if (inputs.cols() == 0) inputs.resize(n, 0);
  if (inputs.rows() != n)
    throw ValidationError("inputs have " + std::to_string(inputs.rows()) + " rows, outputs " +
                          std::to_string(n));
  if (!all_finite(inputs)) throw ValidationError("non-finite value in inputs");

  const auto p = static_cast<std::size_t>(inputs.cols());
  if (input_specs.empty() && p > 0) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("in" + std::to_string(j + 1));
    input_specs = fit_specs(inputs, names);
  }
  if (input_specs.size() != p)
    throw ValidationError("expected " + std::to_string(p) + " input specs, got " +
                          std::to_string(input_specs.size()));

  std::set<std::string> seen;
  for (std::size_t j = 0; j < p; ++j) {
    const auto& spec = input_specs[j];
    if (spec.name.empty()) throw ValidationError("input spec with empty name");
    if (!seen.insert(spec.name).second)
      throw ValidationError("duplicate input name '" + spec.name + "'");
    if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) || !(spec.lower < spec.upper))
      throw ValidationError("input '" + spec.name + "' needs lower < upper");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = inputs(i, static_cast<Eigen::Index>(j));
      if (v < spec.lower || v > spec.upper)
        throw ValidationError("input '" + spec.name + "' value " + format_exact(v) +
                              " at row " + std::to_string(i) + " is outside [" +
                              format_exact(spec.lower) + ", " + format_exact(spec.upper) + "]");
    }
  }

  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    throw ValidationError("expected " + std::to_string(n) + " labels, got " +
                          std::to_string(labels.size()));

  Ensemble e;
  e.inputs_ = std::move(inputs);
  e.input_specs_ = std::move(input_specs);
  e.outputs_ = std::move(outputs);
  e.coordinate_ = std::move(coordinate);
  e.labels_ = std::move(labels);
  return e;
}

Ensemble Ensemble::create(Eigen::MatrixXd outputs, Eigen::VectorXd coordinate,
                          std::vector<std::string> labels) {
  return create(Eigen::MatrixXd(outputs.rows(), 0), {}, std::move(outputs),
                std::move(coordinate), std::move(labels));
}

std::optional<std::size_t> Ensemble::input_index(const std::string& name) const {
  for (std::size_t j = 0; j < input_specs_.size(); ++j)
    if (input_specs_[j].name == name) return j;
  return std::nullopt;
}

bool Ensemble::operator==(const Ensemble& other) const {
  return inputs_.rows() == other.inputs_.rows() && inputs_.cols() == other.inputs_.cols() &&
         inputs_ == other.inputs_ && input_specs_ == other.input_specs_ &&
         outputs_.rows() == other.outputs_.rows() && outputs_.cols() == other.outputs_.cols() &&
         outputs_ == other.outputs_ && coordinate_.size() == other.coordinate_.size() &&
         coordinate_ == other.coordinate_ && labels_ == other.labels_;
}

// ---------------------------------------------------------------------------
// CSV / JSON

std::optional<EnsembleFormat> format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return EnsembleFormat::Csv;
  if (ext == ".json") return EnsembleFormat::Json;
  return std::nullopt;
}

Ensemble load_ensemble(const std::filesystem::path& path, EnsembleFormat format) {
  const auto text = read_text(path);
  return format == EnsembleFormat::Csv ? parse_ensemble_csv(text) : parse_ensemble_json(text);
}

Ensemble parse_ensemble_csv(const std::string& text) {
  const auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw ParseError("empty CSV: missing header row");

  const auto header = split_csv_line(lines[first], first + 1);
  std::vector<std::size_t> in_cols, out_cols;
  std::vector<std::string> in_names, out_names;
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = std::string(trim(header[c]));
    if (name.starts_with("in:")) {
      in_cols.push_back(c);
      in_names.push_back(name.substr(3));
    } else if (name.starts_with("out:")) {
      out_cols.push_back(c);
      out_names.push_back(name.substr(4));
    } else if (name == "label") {
      if (label_col) throw ParseError("duplicate label column");
      label_col = c;
    } else {
      throw ParseError("column '" + name + "' lacks an in:/out: prefix");
    }
  }
  if (out_cols.empty()) throw ParseError("CSV has no out: columns");

  // Output headers carry the coordinate when every suffix is numeric.
  Eigen::VectorXd coordinate(static_cast<Eigen::Index>(out_cols.size()));
  bool numeric = true;
  for (std::size_t k = 0; k < out_names.size(); ++k) {
    auto v = parse_double(out_names[k]);
    if (!v) {
      numeric = false;
      break;
    }
    coordinate[static_cast<Eigen::Index>(k)] = *v;
  }
  if (!numeric)
    for (Eigen::Index k = 0; k < coordinate.size(); ++k) coordinate[k] = static_cast<double>(k);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  for (std::size_t l = first + 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    auto fields = split_csv_line(lines[l], l + 1);
    if (fields.size() != header.size())
      throw ValidationError("ragged row at line " + std::to_string(l + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    rows.push_back(std::move(fields));
    row_lines.push_back(l + 1);
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd inputs(n, static_cast<Eigen::Index>(in_cols.size()));
  Eigen::MatrixXd outputs(n, static_cast<Eigen::Index>(out_cols.size()));
  std::vector<std::string> labels;
  auto cell = [&](std::size_t r, std::size_t c) {
    auto v = parse_double(rows[r][c]);
    if (!v)
      throw ParseError("line " + std::to_string(row_lines[r]) + ": malformed number '" +
                       rows[r][c] + "' in column '" + std::string(trim(header[c])) + "'");
    return *v;
  };
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (std::size_t j = 0; j < in_cols.size(); ++j)
      inputs(i, static_cast<Eigen::Index>(j)) = cell(r, in_cols[j]);
    for (std::size_t k = 0; k < out_cols.size(); ++k)
      outputs(i, static_cast<Eigen::Index>(k)) = cell(r, out_cols[k]);
    if (label_col) labels.push_back(rows[r][*label_col]);
  }

  if (!all_finite(inputs) || !all_finite(outputs))
    throw ValidationError("non-finite value in CSV data");
  auto specs = inputs.rows() > 0 ? fit_specs(inputs, in_names) : std::vector<ParameterSpec>{};
  return Ensemble::create(std::move(inputs), std::move(specs), std::move(outputs),
                          std::move(coordinate), std::move(labels));
}

Ensemble parse_ensemble_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ParseError("ensemble document must be a JSON object");
  try {
    if (!doc.contains("outputs")) throw ParseError("ensemble document lacks 'outputs'");
    if (!doc.contains("coordinate")) throw ParseError("ensemble document lacks 'coordinate'");

    Eigen::MatrixXd outputs = matrix_from_json(doc.at("outputs"), "outputs");
    Eigen::MatrixXd inputs(outputs.rows(), 0);
    if (doc.contains("inputs") && !doc.at("inputs").is_null()) {
      inputs = matrix_from_json(doc.at("inputs"), "inputs");
      if (inputs.size() == 0) inputs.resize(outputs.rows(), 0);
    }

    const auto& coord = doc.at("coordinate");
    if (!coord.is_array()) throw ParseError("'coordinate' must be an array");
    Eigen::VectorXd coordinate(static_cast<Eigen::Index>(coord.size()));
    for (std::size_t k = 0; k < coord.size(); ++k) {
      if (!coord[k].is_number()) throw ParseError("non-numeric coordinate entry");
      coordinate[static_cast<Eigen::Index>(k)] = coord[k].get<double>();
    }

    std::vector<ParameterSpec> specs;
    if (doc.contains("input_specs")) {
      for (const auto& s : doc.at("input_specs")) {
        ParameterSpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.lower = s.at("lower").get<double>();
        spec.upper = s.at("upper").get<double>();
        if (s.contains("unit") && !s.at("unit").is_null()) spec.unit = s.at("unit").get<std::string>();
        specs.push_back(std::move(spec));
      }
    }

    std::vector<std::string> labels;
    if (doc.contains("labels") && !doc.at("labels").is_null())
      labels = doc.at("labels").get<std::vector<std::string>>();

    return Ensemble::create(std::move(inputs), std::move(specs), std::move(outputs),
                            std::move(coordinate), std::move(labels));
  } catch (const json::exception& err) {
    throw ParseError(std::string("malformed ensemble document: ") + err.what());
  }
}

std::string ensemble_to_csv(const Ensemble& e) {
  std::string out;
  std::vector<std::string> header;
  if (!e.labels().empty()) header.push_back("label");
  for (const auto& spec : e.input_specs()) header.push_back(quote_csv("in:" + spec.name));
  for (Eigen::Index k = 0; k < e.coordinate().size(); ++k)
    header.push_back("out:" + format_exact(e.coordinate()[k]));
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    bool first = true;
    auto put = [&](const std::string& s) {
      if (!first) out += ',';
      out += s;
      first = false;
    };
    if (!e.labels().empty()) put(quote_csv(e.labels()[i]));
    for (Eigen::Index j = 0; j < e.inputs().cols(); ++j) put(format_exact(e.inputs()(row, j)));
    for (Eigen::Index k = 0; k < e.outputs().cols(); ++k) put(format_exact(e.outputs()(row, k)));
    out += '\n';
  }
  return out;
}

std::string ensemble_to_json(const Ensemble& e) {
  json doc;
  json specs = json::array();
  for (const auto& s : e.input_specs())
    specs.push_back({{"name", s.name}, {"lower", s.lower}, {"upper", s.upper}, {"unit", s.unit}});
  doc["input_specs"] = std::move(specs);
  if (e.input_dim() > 0) doc["inputs"] = matrix_to_json(e.inputs());
  doc["outputs"] = matrix_to_json(e.outputs());
  doc["coordinate"] = std::vector<double>(e.coordinate().begin(), e.coordinate().end());
  if (!e.labels().empty()) doc["labels"] = e.labels();
  return doc.dump(1) + "\n";
}

void write_ensemble(const Ensemble& e, const std::filesystem::path& path, EnsembleFormat format) {
  write_text(path, format == EnsembleFormat::Csv ? ensemble_to_csv(e) : ensemble_to_json(e));
}

// ---------------------------------------------------------------------------
// NOAA indices

NoaaSstResult parse_noaa_sst(const std::string& text) {
  using Year = std::array<std::optional<double>, 12>;
  std::map<int, Year> years;

  auto parse_int = [](const std::string& tok) -> std::optional<int> {
    auto v = parse_double(tok);
    if (!v || *v != std::floor(*v) || std::abs(*v) > 1e6) return std::nullopt;
    return static_cast<int>(*v);
  };
  auto parse_value = [](const std::string& tok, std::size_t line_no) -> std::optional<double> {
    auto v = parse_double(tok);
    if (!v || !std::isfinite(*v))
      throw ParseError("line " + std::to_string(line_no) + ": malformed value '" + tok + "'");
    if (*v <= -99.0) return std::nullopt;  // NOAA missing-value sentinel
    return v;
  };
  auto store = [&](int year, int month, std::optional<double> v, std::size_t line_no) {
    auto& slot = years[year][static_cast<std::size_t>(month - 1)];
    if (slot) throw ParseError("line " + std::to_string(line_no) + ": duplicate record for " +
                               std::to_string(year) + "-" + std::to_string(month));
    slot = v;
  };

  const auto lines = split_lines(text);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto line_no = l + 1;
    auto content = std::string(trim(lines[l]));
    if (content.empty() || content.front() == '#') continue;
    std::istringstream tokens(content);
    std::vector<std::string> tok;
    for (std::string t; tokens >> t;) tok.push_back(t);

    const auto year = parse_int(tok[0]);
    if (!year) {
      // Column header such as "YR MON NINO1+2 ANOM ..." precedes the data.
      if (!parse_double(tok[0])) continue;
      throw ParseError("line " + std::to_string(line_no) + ": year must be an integer");
    }
    if (tok.size() == 13) {
      for (int month = 1; month <= 12; ++month)
        store(*year, month, parse_value(tok[static_cast<std::size_t>(month)], line_no), line_no);
    } else if (tok.size() >= 3) {
      const auto month = parse_int(tok[1]);
      if (!month || *month < 1 || *month > 12)
        throw ParseError("line " + std::to_string(line_no) + ": month must be 1..12");
      store(*year, *month, parse_value(tok[2], line_no), line_no);
    } else {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 'year month value' or 'year' followed by 12 values");
    }
  }

  std::vector<int> complete, dropped;
  for (const auto& [year, months] : years) {
    const bool full = std::all_of(months.begin(), months.end(), [](const auto& v) { return v.has_value(); });
    (full ? complete : dropped).push_back(year);
  }

  Eigen::MatrixXd outputs(static_cast<Eigen::Index>(complete.size()), 12);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < complete.size(); ++i) {
    const auto& months = years.at(complete[i]);
    for (std::size_t k = 0; k < 12; ++k)
      outputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = *months[k];
    labels.push_back(std::to_string(complete[i]));
  }
  Eigen::VectorXd coordinate = Eigen::VectorXd::LinSpaced(12, 1.0, 12.0);
  return {Ensemble::create(std::move(outputs), std::move(coordinate), std::move(labels)),
          std::move(dropped)};
}

NoaaSstResult load_noaa_sst(const std::filesystem::path& path) {
  return parse_noaa_sst(read_text(path));
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd normalize_inputs(const Ensemble& e) {
  if (e.input_dim() == 0) throw ValidationError("ensemble has no inputs to normalize");
  Eigen::MatrixXd out = e.inputs();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const auto& spec = e.input_specs()[static_cast<std::size_t>(j)];
    const double span = spec.upper - spec.lower;
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      out(i, j) = std::clamp((out(i, j) - spec.lower) / span, 0.0, 1.0);
  }
  return out;
}

Eigen::VectorXd pointwise_stddev(const Eigen::MatrixXd& outputs) {
  const auto n = static_cast<double>(outputs.rows());
  const Eigen::RowVectorXd mean = outputs.colwise().mean();
  const Eigen::MatrixXd centered = outputs.rowwise() - mean;
  return (centered.colwise().squaredNorm() / (n - 1.0)).cwiseSqrt().transpose();
}

Ensemble synthesize_ensemble(std::uint64_t seed, std::size_t n, std::size_t p, std::size_t m,
                             std::size_t outlier_count) {
  if (n < 3) throw ValidationError("N < 3: synthesize_ensemble needs n >= 3");
  if (m < 1) throw ValidationError("synthesize_ensemble needs m >= 1");
  if (outlier_count > n) throw ValidationError("outlier_count exceeds n");

  Rng rng(seed);
  auto truncated_normal = [&rng] {
    double z = rng.normal();
    while (std::abs(z) > 3.0) z = rng.normal();
    return z;
  };

  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(m);
  Eigen::VectorXd t(cols);
  for (Eigen::Index k = 0; k < cols; ++k)
    t[k] = m == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(m - 1);

  Eigen::MatrixXd inputs(rows, static_cast<Eigen::Index>(p));
  Eigen::MatrixXd weights(rows, 3);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) inputs(i, j) = rng.uniform();
    if (p == 0) {
      weights(i, 0) = 1.0 * truncated_normal();
      weights(i, 1) = 0.6 * truncated_normal();
      weights(i, 2) = 0.35 * truncated_normal();
      continue;
    }
    const double q = inputs(i, static_cast<Eigen::Index>(p - 1));
    const double ks_last = p >= 2 ? inputs(i, static_cast<Eigen::Index>(p - 2)) : 0.5;
    const double ks_first = p >= 2 ? inputs(i, 0) : 0.5;
    weights(i, 0) = 1.0 + 4.0 * q;
    weights(i, 1) = 1.5 * (0.5 - ks_last) + 0.5 * truncated_normal();
    weights(i, 2) = 0.5 * (ks_first - 0.5) + 0.3 * truncated_normal();
  }

  Eigen::MatrixXd outputs(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double b1 = std::sin(2.0 * std::numbers::pi * t[k]);
    const double b2 = std::sin(4.0 * std::numbers::pi * t[k]);
    for (Eigen::Index i = 0; i < rows; ++i)
      outputs(i, k) = weights(i, 0) + weights(i, 1) * b1 + weights(i, 2) * b2;
  }

  if (outlier_count > 0) {
    const Eigen::VectorXd sigma = pointwise_stddev(outputs);
    for (std::size_t o = 0; o < outlier_count; ++o)
      outputs.row(static_cast<Eigen::Index>(n - 1 - o)) += 5.0 * sigma.transpose();
  }

  std::vector<ParameterSpec> specs;
  for (std::size_t j = 0; j < p; ++j)
    specs.push_back({j + 1 == p ? "Q" : "Ks" + std::to_string(j + 1), 0.0, 1.0, ""});

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const bool outlier = i + outlier_count >= n;
    labels.push_back((outlier ? "outlier-" : "r") + std::to_string(i));
  }
  return Ensemble::create(std::move(inputs), std::move(specs), std::move(outputs), std::move(t),
                          std::move(labels));
}

}  // namespace spider
