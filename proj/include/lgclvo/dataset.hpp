#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace lgclvo {

// Dense matrices are row-major throughout so instance rows are contiguous
// and can be handed to the kernels directly.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
  RowMatrix features;                // n x d
  std::vector<int> true_classes;     // values in [0, class_count)
  int class_count = 0;
  std::string name;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dims() const { return features.cols(); }
};

// Which instances carry labels and what was observed for them. Observed
// classes may differ from the dataset's true classes once noise is injected.
struct LabelAssignment {
  std::vector<int> labeled_indices;  // distinct, ordered
  std::vector<int> observed_classes; // one per labeled position

  std::size_t count() const { return labeled_indices.size(); }
  // Binary n x c matrix: row i is one-hot for labeled i, zero otherwise.
  RowMatrix indicator(Eigen::Index n, int class_count) const;
};

struct NoiseRecord {
  std::vector<int> corrupted_indices;  // sorted
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

Dataset load_dense_csv(const std::string& path, const std::string& label_column);
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

Dataset generate_gaussian_blobs(Eigen::Index n, Eigen::Index d, int c,
                                double separation, std::uint64_t seed);

LabelAssignment sample_labels(const Dataset& data, std::size_t l, std::uint64_t seed);

std::pair<LabelAssignment, NoiseRecord>
corrupt_labels(const Dataset& data, const LabelAssignment& assignment,
               double fraction, std::uint64_t seed);

void export_csv(const Dataset& data, const std::string& path);

// splitmix64 step; used to derive independent sub-seeds (sampling vs
// corruption) from one trial seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lgclvo
