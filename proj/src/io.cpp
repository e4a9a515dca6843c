#include "treemover/io.hpp"

#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "treemover/errors.hpp"

namespace treemover {

namespace {

using nlohmann::json;

[[noreturn]] void graph_fail(std::size_t graph_index, const std::string& rule) {
    throw ValidationError(rule + " in graph " + std::to_string(graph_index));
}

FeatureVector parse_feature_array(const json& arr, std::size_t graph_index,
                                  const std::string& where) {
    if (!arr.is_array()) graph_fail(graph_index, where + " is not an array");
    FeatureVector x;
    x.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) graph_fail(graph_index, "non-numeric entry in " + where);
        x.push_back(v.get<double>());
    }
    return x;
}

int parse_required_int(const json& obj, const char* key, std::size_t graph_index,
                       const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) {
        graph_fail(graph_index, where + " missing integer field \"" + key + "\"");
    }
    const long long v = it->get<long long>();
    if (v < INT_MIN || v > INT_MAX) graph_fail(graph_index, where + " field \"" + key + "\" out of range");
    return static_cast<int>(v);
}

// Builds one Graph from its JSON object, compacting node ids in input order.
// Returns the graph and its optional label through `label` (-1 = absent).
Graph parse_graph_object(const json& j, std::size_t graph_index, int& label) {
    if (!j.is_object()) graph_fail(graph_index, "record is not a JSON object");
    auto nodes_it = j.find("nodes");
    if (nodes_it == j.end() || !nodes_it->is_array()) {
        graph_fail(graph_index, "missing \"nodes\" array");
    }

    Graph g;
    std::unordered_map<long long, int> id_map;
    bool saw_x = false;
    for (const auto& node : *nodes_it) {
        if (!node.is_object()) graph_fail(graph_index, "node record is not an object");
        const int id = parse_required_int(node, "id", graph_index, "node");
        if (id < 0) graph_fail(graph_index, "negative node id");
        if (!id_map.emplace(id, g.node_count).second) {
            graph_fail(graph_index, "duplicate node id " + std::to_string(id));
        }
        auto x_it = node.find("x");
        if (g.node_count == 0) {
            saw_x = x_it != node.end();
        } else if ((x_it != node.end()) != saw_x) {
            graph_fail(graph_index, "mixed present/absent node features");
        }
        g.features.push_back(saw_x ? parse_feature_array(*x_it, graph_index, "node features")
                                   : FeatureVector{});
        ++g.node_count;
    }

    auto edges_it = j.find("edges");
    if (edges_it == j.end() || !edges_it->is_array()) {
        graph_fail(graph_index, "missing \"edges\" array");
    }
    bool saw_e = false;
    for (const auto& edge : *edges_it) {
        if (!edge.is_object()) graph_fail(graph_index, "edge record is not an object");
        const int raw_u = parse_required_int(edge, "u", graph_index, "edge");
        const int raw_v = parse_required_int(edge, "v", graph_index, "edge");
        auto u_it = id_map.find(raw_u);
        auto v_it = id_map.find(raw_v);
        if (u_it == id_map.end() || v_it == id_map.end()) {
            graph_fail(graph_index, "edge (" + std::to_string(raw_u) + "," +
                                        std::to_string(raw_v) + ") references a missing node id");
        }
        auto e_it = edge.find("e");
        if (g.edges.empty()) {
            saw_e = e_it != edge.end();
        } else if ((e_it != edge.end()) != saw_e) {
            graph_fail(graph_index, "mixed present/absent edge features");
        }
        g.edges.emplace_back(u_it->second, v_it->second);
        if (saw_e) {
            g.edge_features.push_back(parse_feature_array(*e_it, graph_index, "edge features"));
        }
    }

    label = -1;
    auto label_it = j.find("label");
    if (label_it != j.end()) {
        if (!label_it->is_number_integer()) graph_fail(graph_index, "non-integer label");
        label = label_it->get<int>();
        if (label < 0) graph_fail(graph_index, "negative label");
    }

    canonicalize_edges(g);
    validate_graph(g, graph_index);
    return g;
}

void finish_dataset(GraphDataset& ds, const std::vector<int>& raw_labels) {
    bool any = false;
    bool all = true;
    for (int l : raw_labels) {
        if (l >= 0) {
            any = true;
        } else {
            all = false;
        }
    }
    if (!any) return;
    if (!all) throw ValidationError("dataset: labels present on some graphs but not all");
    ds.labels = raw_labels;
    for (int l : ds.labels) ds.classes = std::max(ds.classes, l + 1);
}

}  // namespace

DatasetFormat dataset_format_for_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".json") {
        return DatasetFormat::single_json;
    }
    return DatasetFormat::jsonl;
}

GraphDataset parse_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");

    GraphDataset ds;
    std::vector<int> raw_labels;
    if (format == DatasetFormat::jsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            int label = -1;
            try {
                const json j = json::parse(line);
                ds.graphs.push_back(parse_graph_object(j, ds.graphs.size(), label));
            } catch (const json::exception& ex) {
                throw ValidationError("parse error at line " + std::to_string(line_no) + ": " +
                                      ex.what());
            }
            raw_labels.push_back(label);
        }
    } else {
        try {
            const json root = json::parse(in);
            if (!root.is_object() || !root.contains("graphs") || !root["graphs"].is_array()) {
                throw ValidationError(
                    "parse error: expected top-level object with \"graphs\" array");
            }
            for (const auto& j : root["graphs"]) {
                int label = -1;
                ds.graphs.push_back(parse_graph_object(j, ds.graphs.size(), label));
                raw_labels.push_back(label);
            }
        } catch (const json::exception& ex) {
            throw ValidationError(std::string("parse error: ") + ex.what());
        }
    }
    finish_dataset(ds, raw_labels);
    validate_dataset(ds);
    return ds;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

namespace {

void append_feature_array(std::string& out, const FeatureVector& x) {
    out += '[';
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ',';
        out += format_real(x[i]);
    }
    out += ']';
}

std::string graph_record(const Graph& g, int label) {
    std::string out = "{\"nodes\":[";
    for (int v = 0; v < g.node_count; ++v) {
        if (v) out += ',';
        out += "{\"id\":" + std::to_string(v);
        if (!g.features[v].empty()) {
            out += ",\"x\":";
            append_feature_array(out, g.features[v]);
        }
        out += '}';
    }
    out += "],\"edges\":[";
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (i) out += ',';
        out += "{\"u\":" + std::to_string(g.edges[i].first) +
               ",\"v\":" + std::to_string(g.edges[i].second);
        if (g.has_edge_features()) {
            out += ",\"e\":";
            append_feature_array(out, g.edge_features[i]);
        }
        out += '}';
    }
    out += ']';
    if (label >= 0) out += ",\"label\":" + std::to_string(label);
    out += '}';
    return out;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void serialize_dataset(const GraphDataset& ds, const std::string& path, DatasetFormat format) {
    std::ofstream out = open_for_write(path);
    const auto label_of = [&](std::size_t i) { return ds.has_labels() ? ds.labels[i] : -1; };
    if (format == DatasetFormat::jsonl) {
        for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
            out << graph_record(ds.graphs[i], label_of(i)) << '\n';
        }
    } else {
        out << "{\"graphs\":[";
        for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
            out << (i ? ",\n" : "\n") << graph_record(ds.graphs[i], label_of(i));
        }
        out << (ds.graphs.empty() ? "]}\n" : "\n]}\n");
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_for_write(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_real(row[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

void write_matrix_csv(const std::string& path, const std::vector<std::vector<double>>& rows) {
    std::size_t cols = 0;
    for (const auto& r : rows) cols = std::max(cols, r.size());
    std::vector<std::string> header(cols);
    for (std::size_t i = 0; i < cols; ++i) header[i] = std::to_string(i);
    write_csv(path, header, rows);
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          std::vector<std::string>* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (line_no == 1) {
            if (header) *header = cells;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw ValidationError("non-numeric cell \"" + cell + "\" at line " +
                                      std::to_string(line_no) + " of " + path);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_column_csv(const std::string& path, const std::string& name,
                      const std::vector<double>& values) {
    std::vector<std::vector<double>> rows;
    rows.reserve(values.size());
    for (double v : values) rows.push_back({v});
    write_csv(path, {name}, rows);
}

std::vector<double> read_column_csv(const std::string& path) {
    std::vector<double> values;
    for (const auto& row : read_csv(path)) {
        if (row.size() != 1) {
            throw ValidationError("expected a single column in " + path);
        }
        values.push_back(row[0]);
    }
    return values;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out = open_for_write(path);
    out << contents;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace treemover
