#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "talos/dataset.hpp"

namespace talos {

// Text formats, all tolerant of '#' comment lines:
//   edge list:  "u v" (or tab) per line, 0-based
//   features:   dense CSV rows of 0/1, or sparse triplets "node feature 1"
//   labels:     one integer per line, line i labels node i
//   split:      one of train/val/test per line, line i assigns node i

std::vector<Edge> load_edge_list(const std::filesystem::path& path);
FeatureMatrix load_features(const std::filesystem::path& path);
std::vector<int> load_labels(const std::filesystem::path& path);
SplitMasks load_split(const std::filesystem::path& path, int node_count);

/// Assembles and validates a Dataset. Node count comes from the label file;
/// edge endpoints and feature rows must agree with it. The edge list is
/// symmetrized with duplicates and self-loops dropped. When split_path is
/// empty a seeded default split is generated.
Dataset load_dataset(const std::filesystem::path& graph_path,
                     const std::filesystem::path& features_path,
                     const std::filesystem::path& labels_path,
                     const std::filesystem::path& split_path = {},
                     double train_frac = 0.1, double val_frac = 0.1,
                     std::uint64_t split_seed = 0, bool stratified = true);

// Writers emit the exact formats the loaders read (round-trip stable).
// `header` lines, when given, are written as leading '#' comments.
void save_edge_list(const std::filesystem::path& path, const std::vector<Edge>& edges,
                    const std::vector<std::string>& header = {});
void save_features(const std::filesystem::path& path, const FeatureMatrix& f,
                   const std::vector<std::string>& header = {});
void save_labels(const std::filesystem::path& path, const LabelVector& l,
                 const std::vector<std::string>& header = {});
void save_split(const std::filesystem::path& path, const SplitMasks& m, int node_count,
                const std::vector<std::string>& header = {});

}  // namespace talos
