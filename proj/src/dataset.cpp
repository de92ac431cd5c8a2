#include "lgclvo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lgclvo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::uint32_t read_be32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("IDX file truncated while reading header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RowMatrix LabelAssignment::indicator(Eigen::Index n, int class_count) const {
  RowMatrix y = RowMatrix::Zero(n, class_count);
  for (std::size_t p = 0; p < labeled_indices.size(); ++p)
    y(labeled_indices[p], observed_classes[p]) = 1.0;
  return y;
}

Dataset load_dense_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + path);
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end())
    throw std::runtime_error("label column '" + label_column + "' not found in " + path);
  const std::size_t label_pos = std::size_t(label_it - header.begin());
  const std::size_t d = header.size() - 1;

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(d);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = trim(cells[j]);
      if (j == label_pos) {
        raw_labels.push_back(cell);
        continue;
      }
      if (cell.empty())
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": missing feature value in column '" + header[j] + "'");
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        if (!std::isfinite(v)) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric feature '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw std::runtime_error(path + ": need at least 2 rows");

  // Classes re-indexed densely by first appearance.
  std::map<std::string, int> class_of;
  std::vector<int> classes;
  classes.reserve(raw_labels.size());
  for (const auto& s : raw_labels) {
    auto [it, inserted] = class_of.try_emplace(s, int(class_of.size()));
    classes.push_back(it->second);
  }

  Dataset ds;
  ds.features.resize(Eigen::Index(rows.size()), Eigen::Index(d));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) ds.features(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  ds.true_classes = std::move(classes);
  ds.class_count = int(class_of.size());
  ds.name = path;
  return ds;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("cannot open IDX images file: " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("cannot open IDX labels file: " + labels_path);

  if (read_be32(img) != 0x00000803u)
    throw std::runtime_error(images_path + ": bad IDX image magic (want 0x00000803)");
  const std::uint32_t n = read_be32(img);
  const std::uint32_t rows = read_be32(img);
  const std::uint32_t cols = read_be32(img);

  if (read_be32(lab) != 0x00000801u)
    throw std::runtime_error(labels_path + ": bad IDX label magic (want 0x00000801)");
  const std::uint32_t nl = read_be32(lab);
  if (n != nl)
    throw std::runtime_error("IDX count mismatch: " + std::to_string(n) + " images vs " +
                             std::to_string(nl) + " labels");

  const std::size_t d = std::size_t(rows) * cols;
  Dataset ds;
  ds.features.resize(Eigen::Index(n), Eigen::Index(d));
  std::vector<unsigned char> buf(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), std::streamsize(d));
    if (!img) throw std::runtime_error(images_path + ": truncated image data");
    for (std::size_t j = 0; j < d; ++j)
      ds.features(i, Eigen::Index(j)) = double(buf[j]) / 255.0;
  }
  ds.true_classes.resize(n);
  int max_class = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    char b;
    lab.read(&b, 1);
    if (!lab) throw std::runtime_error(labels_path + ": truncated label data");
    ds.true_classes[i] = int(static_cast<unsigned char>(b));
    max_class = std::max(max_class, ds.true_classes[i]);
  }
  ds.class_count = max_class + 1;
  ds.name = images_path;
  return ds;
}

Dataset generate_gaussian_blobs(Eigen::Index n, Eigen::Index d, int c,
                                double separation, std::uint64_t seed) {
  if (c < 1 || Eigen::Index(c) > n) throw std::invalid_argument("need 1 <= c <= n");
  if (d < 1) throw std::invalid_argument("need d >= 1");
  if (Eigen::Index(c) > d + 1)
    throw std::invalid_argument("cannot place " + std::to_string(c) +
                                " mutually equidistant centers in " + std::to_string(d) +
                                " dimensions");

  // Centers: scaled standard-basis vectors (all pairs at distance
  // separation*sqrt(2)); when c == d+1 the origin completes the simplex.
  RowMatrix centers = RowMatrix::Zero(c, d);
  for (int k = 0; k < c && Eigen::Index(k) < d; ++k) centers(k, k) = separation;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset ds;
  ds.features.resize(n, d);
  ds.true_classes.resize(std::size_t(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int cls = int(i % c);  // per-class counts differ by at most 1
    ds.true_classes[std::size_t(i)] = cls;
    for (Eigen::Index j = 0; j < d; ++j)
      ds.features(i, j) = centers(cls, j) + gauss(rng);
  }
  ds.class_count = c;
  ds.name = "blobs_n" + std::to_string(n) + "_c" + std::to_string(c);
  return ds;
}

LabelAssignment sample_labels(const Dataset& data, std::size_t l, std::uint64_t seed) {
  const std::size_t n = std::size_t(data.size());
  if (l > n) throw std::invalid_argument("label budget exceeds dataset size");
  if (l < std::size_t(data.class_count))
    throw std::invalid_argument("label budget " + std::to_string(l) +
                                " cannot cover all " + std::to_string(data.class_count) +
                                " classes");

  std::mt19937_64 rng(seed);
  std::vector<int> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = int(i);

  // Resample until every class is represented.
  std::vector<int> picked;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000)
      throw std::runtime_error("could not cover all classes after 10000 resamples");
    picked.assign(pool.begin(), pool.end());
    // Partial Fisher-Yates: first l entries are a uniform sample.
    for (std::size_t i = 0; i < l; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(picked[i], picked[pick(rng)]);
    }
    picked.resize(l);
    std::set<int> seen;
    for (int idx : picked) seen.insert(data.true_classes[std::size_t(idx)]);
    if (int(seen.size()) == data.class_count) break;
  }
  std::sort(picked.begin(), picked.end());

  LabelAssignment a;
  a.labeled_indices = std::move(picked);
  a.observed_classes.reserve(l);
  for (int idx : a.labeled_indices)
    a.observed_classes.push_back(data.true_classes[std::size_t(idx)]);
  return a;
}

std::pair<LabelAssignment, NoiseRecord>
corrupt_labels(const Dataset& data, const LabelAssignment& assignment,
               double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw std::invalid_argument("noise fraction must be in [0,1]");
  const std::size_t l = assignment.count();
  const std::size_t m = std::size_t(std::llround(fraction * double(l)));

  LabelAssignment out = assignment;
  NoiseRecord rec;
  rec.fraction = fraction;
  rec.seed = seed;
  if (m == 0) return {out, rec};

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> positions(l);
  for (std::size_t i = 0; i < l; ++i) positions[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, l - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  positions.resize(m);

  const int c = data.class_count;
  for (std::size_t p : positions) {
    const int truth = assignment.observed_classes[p];
    std::uniform_int_distribution<int> other(0, c - 2);
    int flipped = other(rng);
    if (flipped >= truth) ++flipped;  // uniform over the c-1 other classes
    out.observed_classes[p] = flipped;
    rec.corrupted_indices.push_back(assignment.labeled_indices[p]);
  }
  std::sort(rec.corrupted_indices.begin(), rec.corrupted_indices.end());
  return {out, rec};
}

void export_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (Eigen::Index j = 0; j < data.dims(); ++j) out << "f" << j << ",";
  out << "label\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dims(); ++j) out << data.features(i, j) << ",";
    out << data.true_classes[std::size_t(i)] << "\n";
  }
}

}  // namespace lgclvo
