#include "seglearn/datasets.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "seglearn/rng.hpp"

namespace seglearn {

PointCloud make_moons(std::size_t classes, std::size_t per_class, double noise_sd,
                      std::uint64_t seed) {
  if (classes < 2) throw ParameterError("make_moons needs at least 2 classes");
  if (per_class < 1) throw ParameterError("make_moons needs at least 1 point per class");
  if (!(noise_sd >= 0.0)) throw ParameterError("noise_sd must be nonnegative");
  Rng rng(seed);
  PointCloud pc;
  pc.dim = 2;
  pc.coords.reserve(2 * classes * per_class);
  pc.labels.reserve(classes * per_class);
  for (std::size_t j = 0; j < classes; ++j) {
    const bool odd = j % 2 == 1;
    for (std::size_t p = 0; p < per_class; ++p) {
      const double theta = rng.uniform(0.0, std::numbers::pi);
      double x = static_cast<double>(j) + std::cos(theta);
      double y = odd ? 0.3 - std::sin(theta) : std::sin(theta);
      if (noise_sd > 0.0) {
        x += noise_sd * rng.normal();
        y += noise_sd * rng.normal();
      }
      pc.coords.push_back(x);
      pc.coords.push_back(y);
      pc.labels.push_back(static_cast<int>(j));
    }
  }
  return pc;
}

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > bytes.size())
    throw FormatError(path.string() + ": truncated header at byte offset " +
                      std::to_string(offset));
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

std::string hex(std::uint32_t v) {
  std::ostringstream s;
  s << "0x" << std::hex << v;
  return s.str();
}

}  // namespace

IdxImages load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::uint32_t magic = read_be32(bytes, 0, path);
  if (magic != 0x00000803)
    throw FormatError(path.string() + ": bad magic " + hex(magic) +
                      " at byte offset 0 (expected 0x803 for images)");
  IdxImages img;
  img.count = read_be32(bytes, 4, path);
  img.rows = read_be32(bytes, 8, path);
  img.cols = read_be32(bytes, 12, path);
  const std::size_t payload = img.count * img.rows * img.cols;
  if (bytes.size() - 16 < payload)
    throw FormatError(path.string() + ": truncated payload, expected " +
                      std::to_string(payload) + " bytes from byte offset 16, file ends at " +
                      std::to_string(bytes.size()));
  if (bytes.size() - 16 > payload)
    throw FormatError(path.string() + ": dimension mismatch, trailing data at byte offset " +
                      std::to_string(16 + payload));
  img.pixels.assign(bytes.begin() + 16, bytes.end());
  return img;
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::uint32_t magic = read_be32(bytes, 0, path);
  if (magic != 0x00000801)
    throw FormatError(path.string() + ": bad magic " + hex(magic) +
                      " at byte offset 0 (expected 0x801 for labels)");
  const std::size_t count = read_be32(bytes, 4, path);
  if (bytes.size() - 8 < count)
    throw FormatError(path.string() + ": truncated payload, expected " +
                      std::to_string(count) + " bytes from byte offset 8, file ends at " +
                      std::to_string(bytes.size()));
  if (bytes.size() - 8 > count)
    throw FormatError(path.string() + ": dimension mismatch, trailing data at byte offset " +
                      std::to_string(8 + count));
  return {bytes.begin() + 8, bytes.end()};
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  if (images.pixels.size() != images.count * images.rows * images.cols)
    throw DimensionError("pixel buffer does not match image dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  put_be32(out, 0x00000803);
  put_be32(out, static_cast<std::uint32_t>(images.count));
  put_be32(out, static_cast<std::uint32_t>(images.rows));
  put_be32(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  put_be32(out, 0x00000801);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

PointCloud mnist_cloud(const IdxImages& images, std::span<const std::uint8_t> labels) {
  if (labels.size() != images.count)
    throw FormatError("label count " + std::to_string(labels.size()) +
                      " does not match image count " + std::to_string(images.count));
  PointCloud pc;
  pc.dim = images.rows * images.cols;
  pc.coords.resize(images.pixels.size());
  std::transform(images.pixels.begin(), images.pixels.end(), pc.coords.begin(),
                 [](std::uint8_t p) { return static_cast<double>(p) / 255.0; });
  pc.labels.assign(labels.begin(), labels.end());
  return pc;
}

std::vector<std::size_t> subset_by_class(std::span<const int> labels,
                                         std::span<const int> classes,
                                         std::size_t per_class, std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(classes.size() * per_class);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::vector<std::size_t> members;
    for (std::size_t x = 0; x < labels.size(); ++x)
      if (labels[x] == classes[c]) members.push_back(x);
    if (members.size() < per_class)
      throw ParameterError("class " + std::to_string(classes[c]) + " has " +
                           std::to_string(members.size()) + " points, " +
                           std::to_string(per_class) + " requested");
    Rng rng(Rng::stream_seed(seed, c));
    auto pick = rng.sample_without_replacement(members.size(), per_class);
    std::vector<std::size_t> chosen;
    chosen.reserve(per_class);
    for (std::size_t p : pick) chosen.push_back(members[p]);
    std::sort(chosen.begin(), chosen.end());
    out.insert(out.end(), chosen.begin(), chosen.end());
  }
  return out;
}

PointCloud select_points(const PointCloud& pc, std::span<const std::size_t> indices,
                         std::span<const int> classes) {
  PointCloud out;
  out.dim = pc.dim;
  out.coords.reserve(indices.size() * pc.dim);
  for (std::size_t x : indices) {
    if (x >= pc.size()) throw DimensionError("selected index out of range");
    out.coords.insert(out.coords.end(), pc.point(x), pc.point(x) + pc.dim);
    if (pc.has_labels()) {
      int mapped = -1;
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (classes[c] == pc.labels[x]) mapped = static_cast<int>(c);
      out.labels.push_back(mapped);
    }
  }
  return out;
}

PointCloud pca_reduce(const PointCloud& pc, std::size_t components) {
  const std::size_t n = pc.size();
  const std::size_t d = pc.dim;
  if (components == 0 || components > d)
    throw ParameterError("PCA components must be in [1, dim]");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      pc.coords.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigenvalues ascend; take the trailing block and fix each sign so the
  // largest-magnitude loading is positive.
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(components));
  for (std::size_t c = 0; c < components; ++c) {
    Eigen::VectorXd v = eig.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - c));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(static_cast<Eigen::Index>(c)) = v;
  }
  const Eigen::MatrixXd reduced = centered * basis;
  PointCloud out;
  out.dim = components;
  out.labels = pc.labels;
  out.coords.resize(n * components);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < components; ++c)
      out.coords[i * components + c] =
          reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
  return out;
}

LabelData TrialSplit::to_labels(std::size_t num_vertices) const {
  std::vector<std::size_t> boundary;
  std::vector<int> classes;
  for (std::size_t c = 0; c < labeled.size(); ++c)
    for (std::size_t x : labeled[c]) {
      boundary.push_back(x);
      classes.push_back(static_cast<int>(c));
    }
  return LabelData(num_vertices, std::move(boundary), std::move(classes), labeled.size());
}

TrialSplit sample_split(std::span<const int> truth, std::size_t num_classes,
                        std::size_t labels_per_class, std::uint64_t seed) {
  if (labels_per_class == 0) throw ParameterError("labels_per_class must be positive");
  std::vector<int> classes(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) classes[c] = static_cast<int>(c);
  const auto flat = subset_by_class(truth, classes, labels_per_class, seed);
  TrialSplit split;
  split.seed = seed;
  split.labeled.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c)
    split.labeled[c].assign(flat.begin() + static_cast<std::ptrdiff_t>(c * labels_per_class),
                            flat.begin() + static_cast<std::ptrdiff_t>((c + 1) * labels_per_class));
  return split;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end && !tok.empty();
}

}  // namespace

PointCloud csv_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::ptrdiff_t drop_column = -1;
  bool first = true;
  PointCloud pc;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto tokens = split_row(line);
    if (first) {
      first = false;
      double probe = 0.0;
      if (!parse_double(tokens.front(), probe)) {
        for (std::size_t c = 0; c < tokens.size(); ++c)
          if (tokens[c] == "predicted") drop_column = static_cast<std::ptrdiff_t>(c);
        columns = tokens.size();
        continue;
      }
    }
    if (columns == 0) columns = tokens.size();
    if (tokens.size() != columns)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " columns, found " +
                        std::to_string(tokens.size()));
    if (drop_column >= 0) tokens.erase(tokens.begin() + drop_column);
    if (tokens.size() < 2)
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": need at least one coordinate and a label");
    pc.dim = tokens.size() - 1;
    for (std::size_t c = 0; c + 1 < tokens.size(); ++c) {
      double v = 0.0;
      if (!parse_double(tokens[c], v))
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                          std::string(tokens[c]) + "'");
      pc.coords.push_back(v);
    }
    double label = 0.0;
    if (!parse_double(tokens.back(), label) || label != std::floor(label) || label < -1.0)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad label '" +
                        std::string(tokens.back()) + "'");
    pc.labels.push_back(static_cast<int>(label));
  }
  if (pc.labels.empty()) throw FormatError(path.string() + ": no data rows");
  pc.validate();
  return pc;
}

void csv_write(const std::filesystem::path& path, const PointCloud& pc,
               std::span<const int> predictions) {
  const std::size_t n = pc.size();
  if (!predictions.empty() && predictions.size() != n)
    throw DimensionError("prediction count does not match point count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  for (std::size_t c = 0; c < pc.dim; ++c) out << 'x' << c << ',';
  out << "label";
  if (!predictions.empty()) out << ",predicted";
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < pc.dim; ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, pc.point(i)[c]);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << (pc.has_labels() ? pc.labels[i] : -1);
    if (!predictions.empty()) out << ',' << predictions[i];
    out << '\n';
  }
}

}  // namespace seglearn
