#include "talos/io.hpp"

#include <fstream>
#include <sstream>

#include "talos/errors.hpp"

namespace talos {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

bool skippable(const std::string& line) {
    for (char c : line)
        if (!isspace(static_cast<unsigned char>(c))) return c == '#';
    return true;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line_no,
                             const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

void write_header(std::ofstream& out, const std::vector<std::string>& header) {
    for (const auto& h : header) out << "# " << h << "\n";
}

}  // namespace

std::vector<Edge> load_edge_list(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<Edge> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream ss(line);
        long long u, v;
        if (!(ss >> u >> v)) parse_fail(path, line_no, "expected two node indices");
        std::string rest;
        if (ss >> rest) parse_fail(path, line_no, "trailing content '" + rest + "'");
        if (u < 0 || v < 0) parse_fail(path, line_no, "negative node index");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return edges;
}

FeatureMatrix load_features(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    std::vector<std::string> rows;
    std::vector<int> row_line_no;
    int line_no = 0;
    bool sparse = false, dense = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        if (line.find(',') != std::string::npos)
            dense = true;
        else
            sparse = true;
        rows.push_back(line);
        row_line_no.push_back(line_no);
    }
    if (rows.empty()) throw DataError(path.string() + ": empty feature file");
    if (dense && sparse)
        throw DataError(path.string() + ": mixed dense CSV and sparse triplet lines");

    if (dense) {
        int dim = -1;
        std::vector<std::vector<bool>> values;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::vector<bool> row;
            std::istringstream ss(rows[r]);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                std::string t;
                for (char c : cell)
                    if (!isspace(static_cast<unsigned char>(c))) t += c;
                if (t == "0")
                    row.push_back(false);
                else if (t == "1")
                    row.push_back(true);
                else
                    parse_fail(path, row_line_no[r], "non-binary feature value '" + t + "'");
            }
            if (dim < 0)
                dim = static_cast<int>(row.size());
            else if (static_cast<int>(row.size()) != dim)
                parse_fail(path, row_line_no[r], "inconsistent row width");
            values.push_back(std::move(row));
        }
        FeatureMatrix f(static_cast<int>(values.size()), dim);
        for (int i = 0; i < f.node_count(); ++i)
            for (int j = 0; j < dim; ++j)
                if (values[i][j]) f.set(i, j, true);
        return f;
    }

    // sparse triplets: dimensions inferred from max indices
    struct Triplet { int node, feature; };
    std::vector<Triplet> triplets;
    int max_node = -1, max_feature = -1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::istringstream ss(rows[r]);
        long long node, feature, value;
        if (!(ss >> node >> feature >> value))
            parse_fail(path, row_line_no[r], "expected 'node feature value' triplet");
        if (value != 1)
            parse_fail(path, row_line_no[r],
                       "non-binary feature value '" + std::to_string(value) + "'");
        if (node < 0 || feature < 0) parse_fail(path, row_line_no[r], "negative index");
        triplets.push_back({static_cast<int>(node), static_cast<int>(feature)});
        max_node = std::max<int>(max_node, static_cast<int>(node));
        max_feature = std::max<int>(max_feature, static_cast<int>(feature));
    }
    FeatureMatrix f(max_node + 1, max_feature + 1);
    for (const auto& t : triplets) f.set(t.node, t.feature, true);
    return f;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream ss(line);
        long long y;
        if (!(ss >> y)) parse_fail(path, line_no, "expected an integer label");
        if (y < 0) parse_fail(path, line_no, "negative label");
        labels.push_back(static_cast<int>(y));
    }
    return labels;
}

SplitMasks load_split(const std::filesystem::path& path, int node_count) {
    auto in = open_input(path);
    SplitMasks m;
    std::string line;
    int line_no = 0, node = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (node >= node_count) parse_fail(path, line_no, "more split lines than nodes");
        if (tag == "train")
            m.train.push_back(node);
        else if (tag == "val")
            m.val.push_back(node);
        else if (tag == "test")
            m.test.push_back(node);
        else if (tag != "none")
            parse_fail(path, line_no, "expected train/val/test/none, got '" + tag + "'");
        ++node;
    }
    if (node != node_count)
        throw DataError(path.string() + ": split covers " + std::to_string(node) +
                        " nodes, expected " + std::to_string(node_count));
    return m;
}

Dataset load_dataset(const std::filesystem::path& graph_path,
                     const std::filesystem::path& features_path,
                     const std::filesystem::path& labels_path,
                     const std::filesystem::path& split_path,
                     double train_frac, double val_frac,
                     std::uint64_t split_seed, bool stratified) {
    Dataset d;
    auto raw_labels = load_labels(labels_path);
    int n = static_cast<int>(raw_labels.size());
    d.labels.labels = std::move(raw_labels);
    d.labels.class_count =
        d.labels.labels.empty() ? 0 : *std::max_element(d.labels.labels.begin(),
                                                        d.labels.labels.end()) + 1;
    d.features = load_features(features_path);
    if (d.features.node_count() > n)
        throw DataError(features_path.string() + ": feature rows exceed label count");
    if (d.features.node_count() < n) {
        // sparse feature files may omit trailing all-zero nodes
        FeatureMatrix grown(n, d.features.feature_dim());
        for (int i = 0; i < d.features.node_count(); ++i)
            for (int f = 0; f < d.features.feature_dim(); ++f)
                if (d.features.get(i, f)) grown.set(i, f, true);
        d.features = std::move(grown);
    }
    d.graph = Graph::from_edges(n, load_edge_list(graph_path));
    d.split = split_path.empty() ? make_split(d.labels, train_frac, val_frac, split_seed, stratified)
                                 : load_split(split_path, n);
    validate_dataset(d);
    return d;
}

void save_edge_list(const std::filesystem::path& path, const std::vector<Edge>& edges,
                    const std::vector<std::string>& header) {
    auto out = open_output(path);
    write_header(out, header);
    for (const auto& [u, v] : edges) out << u << " " << v << "\n";
}

void save_features(const std::filesystem::path& path, const FeatureMatrix& f,
                   const std::vector<std::string>& header) {
    auto out = open_output(path);
    write_header(out, header);
    for (int i = 0; i < f.node_count(); ++i) {
        for (int j = 0; j < f.feature_dim(); ++j) {
            if (j) out << ",";
            out << (f.get(i, j) ? 1 : 0);
        }
        out << "\n";
    }
}

void save_labels(const std::filesystem::path& path, const LabelVector& l,
                 const std::vector<std::string>& header) {
    auto out = open_output(path);
    write_header(out, header);
    for (int y : l.labels) out << y << "\n";
}

void save_split(const std::filesystem::path& path, const SplitMasks& m, int node_count,
                const std::vector<std::string>& header) {
    auto out = open_output(path);
    write_header(out, header);
    std::vector<std::string> tag(node_count, "none");
    for (int v : m.train) tag[v] = "train";
    for (int v : m.val) tag[v] = "val";
    for (int v : m.test) tag[v] = "test";
    for (int i = 0; i < node_count; ++i) out << tag[i] << "\n";
}

}  // namespace talos
