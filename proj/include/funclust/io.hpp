#pragma once

// Reading metric spaces from CSV and writing spaces, dendrograms,
// correspondences and tables in text, CSV, JSON and DOT.
//
// Distance CSV: first row is the labels; each further row holds either the
// full row i or its lower part d(i,0..i) including the zero diagonal.
// Point CSV: one point per row; an optional header row and an optional
// leading label column are recognised by their non-numeric cells.

#include "funclust/error.hpp"
#include "funclust/gh.hpp"
#include "funclust/metric.hpp"
#include "funclust/persistence.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace funclust {

/// 12 significant digits, shortest form.
inline std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view line, char separator) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(separator, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline bool parse_double(const std::string& cell, double& value) {
    if (cell.empty()) {
        return false;
    }
    std::size_t used = 0;
    try {
        value = std::stod(cell, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == cell.size();
}

inline std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        rows.push_back(split(line, ','));
    }
    return rows;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("IoError", "cannot open " + path);
    }
    return in;
}

}  // namespace detail

inline FiniteMetricSpace read_distance_csv(std::istream& in, bool pseudo = false) {
    const auto rows = detail::read_rows(in);
    if (rows.empty()) {
        throw Error("BadShape", "distance CSV is empty");
    }
    const auto& labels = rows.front();
    const std::size_t n = labels.size();
    if (rows.size() != n + 1) {
        throw Error("BadShape", std::to_string(n) + " labels but " + std::to_string(rows.size() - 1) + " rows");
    }
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    bool lower = true;
    bool full = true;
    for (std::size_t i = 0; i < n; ++i) {
        lower = lower && rows[i + 1].size() == i + 1;
        full = full && rows[i + 1].size() == n;
    }
    if (!lower && !full) {
        throw Error("BadShape", "rows must be full (n entries) or lower triangular (i+1 entries)");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < rows[i + 1].size(); ++j) {
            double value = 0.0;
            if (!detail::parse_double(rows[i + 1][j], value)) {
                throw Error("NonFinite", "entry (" + std::to_string(i) + "," + std::to_string(j) + ") '" +
                                             rows[i + 1][j] + "' is not a number");
            }
            matrix[i][j] = value;
            if (!full) {
                matrix[j][i] = value;
            }
        }
    }
    return validate_metric(matrix, pseudo, labels);
}

inline FiniteMetricSpace read_distance_csv(const std::string& path, bool pseudo = false) {
    auto in = detail::open_input(path);
    return read_distance_csv(in, pseudo);
}

struct LabelledCloud {
    PointCloud cloud;
    std::vector<std::string> labels;
};

inline LabelledCloud read_point_csv(std::istream& in) {
    auto rows = detail::read_rows(in);
    if (rows.empty()) {
        throw Error("BadShape", "point CSV is empty");
    }
    double scratch = 0.0;
    const auto numeric = [&](const std::string& cell) { return detail::parse_double(cell, scratch); };
    const bool has_header = !numeric(rows.front().back());
    if (has_header) {
        rows.erase(rows.begin());
    }
    if (rows.empty()) {
        throw Error("BadShape", "point CSV has a header but no points");
    }
    const bool has_labels = !numeric(rows.front().front());
    const std::size_t dim = rows.front().size() - (has_labels ? 1 : 0);
    if (dim == 0) {
        throw Error("BadShape", "points need at least one coordinate");
    }
    LabelledCloud out{PointCloud(dim), {}};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != dim + (has_labels ? 1 : 0)) {
            throw Error("BadShape", "row " + std::to_string(r) + " has " + std::to_string(row.size()) + " cells");
        }
        std::vector<double> point;
        for (std::size_t c = has_labels ? 1 : 0; c < row.size(); ++c) {
            double value = 0.0;
            if (!detail::parse_double(row[c], value) || !std::isfinite(value)) {
                throw Error("NonFinite", "row " + std::to_string(r) + " cell '" + row[c] + "' is not a number");
            }
            point.push_back(value);
        }
        out.cloud.add(point);
        out.labels.push_back(has_labels ? row.front() : std::to_string(r));
    }
    return out;
}

/// Euclidean metric of a point CSV. Coincident points need `pseudo`.
inline FiniteMetricSpace read_point_space(const std::string& path, bool pseudo = false) {
    auto in = detail::open_input(path);
    auto [cloud, labels] = read_point_csv(in);
    const auto space = cloud.to_metric_space({}, labels);
    return validate_metric(space.matrix(), pseudo, space.labels());
}

inline void write_distance_csv(std::ostream& out, const FiniteMetricSpace& space) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << (i ? "," : "") << space.label(i);
    }
    out << '\n';
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = 0; j < space.size(); ++j) {
            out << (j ? "," : "") << format_number(space(i, j));
        }
        out << '\n';
    }
}

inline std::string format_partition(const Partition& partition, const std::vector<std::string>& labels) {
    std::string out;
    for (std::size_t b = 0; b < partition.blocks().size(); ++b) {
        if (b) {
            out += '|';
        }
        const auto& block = partition.blocks()[b];
        for (std::size_t k = 0; k < block.size(); ++k) {
            if (k) {
                out += ',';
            }
            out += labels[block[k]];
        }
    }
    return out;
}

/// One line per level: "r=<height>; A,B|C", starting with the partition at 0.
inline void write_dendrogram_text(std::ostream& out, const PersistentSet& p) {
    for (std::size_t i = 0; i < p.partitions().size(); ++i) {
        const double height = i == 0 ? 0.0 : p.breakpoints()[i - 1];
        out << "r=" << format_number(height) << "; " << format_partition(p.partitions()[i], p.labels()) << '\n';
    }
}

/// Inverse of write_dendrogram_text.
inline PersistentSet read_dendrogram_text(std::istream& in) {
    std::vector<std::pair<double, std::vector<std::vector<std::string>>>> levels;
    std::string line;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto semicolon = line.find(';');
        if (line.rfind("r=", 0) != 0 || semicolon == std::string::npos) {
            throw Error("BadShape", "dendrogram line '" + line + "' is not 'r=<height>; blocks'");
        }
        double height = 0.0;
        if (!detail::parse_double(detail::trim(line.substr(2, semicolon - 2)), height)) {
            throw Error("BadShape", "dendrogram line '" + line + "' has a bad height");
        }
        std::vector<std::vector<std::string>> blocks;
        for (const auto& block : detail::split(line.substr(semicolon + 1), '|')) {
            blocks.push_back(detail::split(block, ','));
        }
        levels.emplace_back(height, std::move(blocks));
    }
    if (levels.empty() || levels.front().first != 0.0) {
        throw Error("BadShape", "dendrogram must start with an r=0 line");
    }
    std::vector<std::string> labels;
    for (const auto& block : levels.front().second) {
        labels.insert(labels.end(), block.begin(), block.end());
    }
    const auto to_partition = [&](const std::vector<std::vector<std::string>>& named) {
        std::vector<std::vector<std::size_t>> blocks;
        for (const auto& block : named) {
            std::vector<std::size_t> ids;
            for (const auto& label : block) {
                const auto it = std::find(labels.begin(), labels.end(), label);
                if (it == labels.end()) {
                    throw Error("GroundSetMismatch", "label '" + label + "' absent at r=0");
                }
                ids.push_back(static_cast<std::size_t>(it - labels.begin()));
            }
            blocks.push_back(std::move(ids));
        }
        return Partition::from_blocks(labels.size(), blocks);
    };
    std::vector<PersistentSet::Step> steps;
    for (std::size_t i = 1; i < levels.size(); ++i) {
        steps.push_back({levels[i].first, to_partition(levels[i].second)});
    }
    return PersistentSet::build(labels, to_partition(levels.front().second), std::move(steps));
}

inline nlohmann::json partition_json(const Partition& partition, const std::vector<std::string>& labels) {
    auto blocks = nlohmann::json::array();
    for (const auto& block : partition.blocks()) {
        auto names = nlohmann::json::array();
        for (const std::size_t x : block) {
            names.push_back(labels[x]);
        }
        blocks.push_back(std::move(names));
    }
    return blocks;
}

/// {"labels": [...], "levels": [{"r": 0, "blocks": [["A","B"],["C"]]}, ...]}
inline nlohmann::json dendrogram_json(const PersistentSet& p) {
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t i = 0; i < p.partitions().size(); ++i) {
        levels.push_back({{"r", i == 0 ? 0.0 : p.breakpoints()[i - 1]},
                          {"blocks", partition_json(p.partitions()[i], p.labels())}});
    }
    return {{"labels", p.labels()}, {"levels", levels}};
}

/// Merge tree: a node per block at the level it first appears, with an edge
/// to it from each block of the previous level that it contains.
inline void write_dendrogram_dot(std::ostream& out, const PersistentSet& p) {
    out << "digraph dendrogram {\n  rankdir=BT;\n";
    std::vector<std::size_t> current;  // node id of each block at the previous level
    std::size_t next_id = 0;
    const auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"' || c == '\\') {
                q += '\\';
            }
            q += c;
        }
        return q + '"';
    };
    for (std::size_t level = 0; level < p.partitions().size(); ++level) {
        const auto& part = p.partitions()[level];
        const double height = level == 0 ? 0.0 : p.breakpoints()[level - 1];
        std::vector<std::size_t> ids(part.block_count());
        for (std::size_t b = 0; b < part.block_count(); ++b) {
            const auto& block = part.blocks()[b];
            std::vector<std::size_t> children;
            if (level > 0) {
                const auto& prev = p.partitions()[level - 1];
                for (std::size_t c = 0; c < prev.block_count(); ++c) {
                    if (part.block_of(prev.blocks()[c].front()) == b) {
                        children.push_back(current[c]);
                    }
                }
            }
            if (children.size() == 1) {
                ids[b] = children.front();
                continue;
            }
            ids[b] = next_id++;
            std::string label = level == 0 && block.size() == 1 ? p.labels()[block.front()]
                                                                : "r=" + format_number(height);
            out << "  n" << ids[b] << " [label=" << quote(label) << "];\n";
            for (const std::size_t child : children) {
                out << "  n" << child << " -> n" << ids[b] << ";\n";
            }
        }
        current = std::move(ids);
    }
    out << "}\n";
}

/// One "x,y" line per pair of the relation, by label.
inline void write_correspondence(std::ostream& out, const Correspondence& relation, const FiniteMetricSpace& x,
                                 const FiniteMetricSpace& y) {
    for (const auto& [a, b] : relation) {
        out << x.label(a) << ',' << y.label(b) << '\n';
    }
}

}  // namespace funclust
