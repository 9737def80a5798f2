#include "spinsys/formats.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spinsys/error.hpp"

namespace spinsys {

using nlohmann::json;

Graph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    long long n = -1, mcount = -1;
    std::vector<std::pair<int, int>> edges;
    auto bad = [&](const std::string& why) {
        fail(ErrorClass::parse, "graph line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n >> mcount)) {
                std::string probe;
                std::istringstream ls2(line);
                if (ls2 >> probe) bad("expected header 'n m'");
                n = -1; // blank line before header
                continue;
            }
            if (n < 0 || mcount < 0) bad("negative header");
            std::string extra;
            if (ls >> extra) bad("trailing tokens after header");
            continue;
        }
        long long u, v;
        if (!(ls >> u)) continue; // blank
        if (!(ls >> v)) bad("expected 'u v'");
        std::string extra;
        if (ls >> extra) bad("trailing tokens after edge");
        if (u < 1 || u > n || v < 1 || v > n) bad("vertex out of range");
        edges.push_back({static_cast<int>(u - 1), static_cast<int>(v - 1)});
    }
    if (n < 0) fail(ErrorClass::parse, "graph file missing header");
    if (static_cast<long long>(edges.size()) != mcount)
        fail(ErrorClass::parse, "edge count mismatch: header says " + std::to_string(mcount) +
                                    ", found " + std::to_string(edges.size()));
    return Graph::from_edges(static_cast<int>(n), std::move(edges));
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream os;
    os << g.n() << " " << g.m() << "\n";
    for (auto [u, v] : g.edges()) os << u + 1 << " " << v + 1 << "\n";
    return os.str();
}

namespace {

Rat rat_from_json(const json& j) {
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number_float()) return Rat(j.get<double>());
    fail(ErrorClass::parse, "expected rational (string, integer, or decimal)");
}

json rat_to_json(const Rat& r) {
    if (denominator(r) == 1 && abs(numerator(r)) < 1000000000) {
        return json(numerator(r).convert_to<long long>());
    }
    return json(rat_to_string(r));
}

} // namespace

SpinModel parse_model_json(const std::string& text, const Graph& g) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorClass::parse, std::string("model JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind"))
        fail(ErrorClass::validation, "model spec needs a 'kind'");
    std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "coloring") {
            return SpinModel::coloring(g, j.at("q").get<int>());
        }
        if (kind == "list-coloring") {
            int q = j.at("q").get<int>();
            std::vector<std::vector<int>> lists;
            for (const auto& lv : j.at("lists")) {
                std::vector<int> l;
                for (const auto& c : lv) l.push_back(c.get<int>() - 1);
                lists.push_back(std::move(l));
            }
            return SpinModel::list_coloring(g, q, std::move(lists));
        }
        if (kind == "hardcore") {
            return SpinModel::hardcore(g, rat_from_json(j.at("lambda")));
        }
        if (kind == "ising") {
            Rat edge = j.contains("edge_weight") ? rat_from_json(j["edge_weight"])
                                                 : Rat(std::exp(j.at("beta").get<double>()));
            Rat field = j.contains("field") ? rat_from_json(j["field"]) : Rat(1);
            return SpinModel::ising(g, edge, field);
        }
        if (kind == "general") {
            int q = j.at("q").get<int>();
            std::vector<std::vector<Rat>> ae, av;
            for (const auto& row : j.at("A_E")) {
                std::vector<Rat> r;
                for (const auto& x : row) r.push_back(rat_from_json(x));
                ae.push_back(std::move(r));
            }
            const auto& javv = j.at("A_V");
            if (javv.empty()) fail(ErrorClass::validation, "empty A_V");
            if (javv[0].is_array()) {
                for (const auto& row : javv) {
                    std::vector<Rat> r;
                    for (const auto& x : row) r.push_back(rat_from_json(x));
                    av.push_back(std::move(r));
                }
            } else {
                std::vector<Rat> r;
                for (const auto& x : javv) r.push_back(rat_from_json(x));
                av.push_back(std::move(r));
            }
            return SpinModel::general(g, q, std::move(ae), std::move(av));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorClass::validation, std::string("model spec: ") + e.what());
    }
    fail(ErrorClass::validation, "unknown model kind: " + kind);
}

std::string serialize_model(const SpinModel& m) {
    json j;
    switch (m.kind) {
        case ModelKind::coloring: j["kind"] = "coloring"; break;
        case ModelKind::list_coloring: j["kind"] = "list-coloring"; break;
        case ModelKind::hardcore: j["kind"] = "hardcore"; break;
        case ModelKind::ising: j["kind"] = "ising"; break;
        case ModelKind::general: j["kind"] = "general"; break;
    }
    if (m.kind == ModelKind::coloring) {
        j["q"] = m.q;
    } else if (m.kind == ModelKind::list_coloring) {
        j["q"] = m.q;
        json lists = json::array();
        for (int v = 0; v < m.n(); ++v) {
            json l = json::array();
            for (int c = 0; c < m.q; ++c)
                if (m.aV(v, c) > 0) l.push_back(c + 1);
            lists.push_back(std::move(l));
        }
        j["lists"] = std::move(lists);
    } else if (m.kind == ModelKind::hardcore) {
        j["lambda"] = rat_to_json(m.vertex_w[0][1]);
    } else if (m.kind == ModelKind::ising) {
        j["edge_weight"] = rat_to_json(m.edge_w[0][0]);
        j["field"] = rat_to_json(m.vertex_w[0][1]);
    } else {
        j["q"] = m.q;
        json ae = json::array();
        for (const auto& row : m.edge_w) {
            json r = json::array();
            for (const auto& x : row) r.push_back(rat_to_json(x));
            ae.push_back(std::move(r));
        }
        j["A_E"] = std::move(ae);
        json av = json::array();
        for (const auto& row : m.vertex_w) {
            json r = json::array();
            for (const auto& x : row) r.push_back(rat_to_json(x));
            av.push_back(std::move(r));
        }
        j["A_V"] = std::move(av);
    }
    return j.dump();
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorClass::io, "cannot open graph file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph_text(ss.str());
}

SpinModel load_model_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) fail(ErrorClass::io, "cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_json(ss.str(), g);
}

Pinning parse_pinning(const std::string& text) {
    std::vector<std::pair<int, int>> assign;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(ErrorClass::parse, "pinning item needs 'v:c'");
        int v = std::stoi(item.substr(0, colon));
        int c = std::stoi(item.substr(colon + 1));
        if (v < 1 || c < 1) fail(ErrorClass::parse, "pinning uses 1-indexed vertices/colours");
        assign.push_back({v - 1, c - 1});
    }
    return Pinning(std::move(assign));
}

std::string format_pinning(const Pinning& pin) {
    std::ostringstream os;
    bool first = true;
    for (auto& [v, c] : pin.items()) {
        if (!first) os << ",";
        os << v + 1 << ":" << c + 1;
        first = false;
    }
    return os.str();
}

} // namespace spinsys
