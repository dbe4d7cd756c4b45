#include "support.hpp"

#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace spider::test {

namespace pt = boost::property_tree;

std::filesystem::path data_dir() { return SPIDER_TEST_DATA; }

TempDir::TempDir() {
  static std::mt19937_64 salt(std::random_device{}());
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    auto candidate = base / ("spider-test-" + std::to_string(salt()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ObjFile parse_obj(const std::string& text) {
  ObjFile obj;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      obj.comments.push_back(line.substr(line.find_first_not_of("# ")));
      continue;
    }
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "v") {
      std::vector<double> values;
      double x;
      while (fields >> x) values.push_back(x);
      if (values.size() != 3 && values.size() != 6) throw std::runtime_error("bad vertex: " + line);
      obj.positions.push_back({values[0], values[1], values[2]});
      if (values.size() == 6) obj.colours.push_back({values[3], values[4], values[5]});
    } else if (kind == "f" || kind == "l") {
      std::vector<std::size_t> idx;
      long k;
      while (fields >> k) {
        if (k < 1) throw std::runtime_error("bad index: " + line);
        idx.push_back(static_cast<std::size_t>(k - 1));
      }
      if (kind == "f") {
        obj.faces.push_back(idx);
      } else {
        if (idx.size() != 2) throw std::runtime_error("bad line element: " + line);
        obj.lines.push_back({idx[0], idx[1]});
      }
    } else {
      throw std::runtime_error("unknown OBJ record: " + line);
    }
  }
  return obj;
}

pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

namespace {

bool has_class(const pt::ptree& element, const std::string& cls) {
  if (cls.empty()) return true;
  const auto value = element.get_optional<std::string>("<xmlattr>.class");
  if (!value) return false;
  std::istringstream tokens(*value);
  std::string t;
  while (tokens >> t)
    if (t == cls) return true;
  return false;
}

void collect(const pt::ptree& node, const std::string& tag, const std::string& cls,
             std::vector<const pt::ptree*>& out) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (name == tag && has_class(child, cls)) out.push_back(&child);
    collect(child, tag, cls, out);
  }
}

}  // namespace

std::vector<const pt::ptree*> find_elements(const pt::ptree& root, const std::string& tag, const std::string& cls) {
  std::vector<const pt::ptree*> out;
  collect(root, tag, cls, out);
  return out;
}

std::string attr(const pt::ptree& element, const std::string& name) {
  return element.get<std::string>("<xmlattr>." + name, "");
}

std::vector<std::array<double, 2>> parse_points(const std::string& points) {
  std::vector<std::array<double, 2>> out;
  std::istringstream in(points);
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    out.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
  }
  return out;
}

double kde_oracle(const Eigen::MatrixXd& samples, const Eigen::VectorXd& h, const Eigen::VectorXd& x) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    double product = 1.0;
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      const double u = (x[j] - samples(i, j)) / h[j];
      product *= std::exp(-u * u / 2.0) / (h[j] * std::sqrt(2.0 * std::numbers::pi));
    }
    total += product;
  }
  return total / static_cast<double>(samples.rows());
}

double dft_peak_frequency(const std::vector<double>& samples, double sample_rate, double max_frequency) {
  const std::size_t n = samples.size();
  const auto last = std::min(n / 2, static_cast<std::size_t>(max_frequency * static_cast<double>(n) / sample_rate));
  std::size_t best = 1;
  double best_mag = -1.0;
  for (std::size_t k = 1; k <= last; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      re += samples[t] * std::cos(phase);
      im -= samples[t] * std::sin(phase);
    }
    const double mag = re * re + im * im;
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return static_cast<double>(best) * sample_rate / static_cast<double>(n);
}

std::vector<std::pair<std::string, std::string>> snapshot_tree(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      out.emplace_back(std::filesystem::relative(entry.path(), root).generic_string(), read_text(entry.path()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spider::test
