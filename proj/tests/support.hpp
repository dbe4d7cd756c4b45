#pragma once

#include <boost/property_tree/ptree.hpp>
#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spider::test {

std::filesystem::path data_dir();

/// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_text(const std::filesystem::path& path);

/// Minimal OBJ reader: `v` with optional colour, `f`, `l`, `#`.
struct ObjFile {
  std::vector<std::array<double, 3>> positions;
  std::vector<std::array<double, 3>> colours;
  std::vector<std::vector<std::size_t>> faces;  // 0-based
  std::vector<std::array<std::size_t, 2>> lines;
  std::vector<std::string> comments;
};
ObjFile parse_obj(const std::string& text);

/// Strict XML parse; throws on malformed markup.
boost::property_tree::ptree parse_xml(const std::string& text);

/// Elements with tag `tag` whose class list contains `cls` (empty = any).
std::vector<const boost::property_tree::ptree*> find_elements(const boost::property_tree::ptree& root,
                                                              const std::string& tag,
                                                              const std::string& cls = {});
std::string attr(const boost::property_tree::ptree& element, const std::string& name);
std::vector<std::array<double, 2>> parse_points(const std::string& points);

/// Product-Gaussian KDE as a plain double loop over samples and dimensions.
double kde_oracle(const Eigen::MatrixXd& samples, const Eigen::VectorXd& h, const Eigen::VectorXd& x);

/// Frequency of the largest DFT magnitude bin (excluding DC) at or below
/// `max_frequency`, by direct summation.
double dft_peak_frequency(const std::vector<double>& samples, double sample_rate, double max_frequency);

/// Every file under `root`, relative path to contents.
std::vector<std::pair<std::string, std::string>> snapshot_tree(const std::filesystem::path& root);

}  // namespace spider::test
