#include "distvrft/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "distvrft/errors.hpp"

namespace distvrft {

using json = nlohmann::ordered_json;

namespace {

json poly_to_json(const Polynomial& p) {
    json arr = json::array();
    for (double c : p.coeffs()) arr.push_back(c);
    if (arr.empty()) arr.push_back(0.0);
    return arr;
}

json tf_to_json(const RationalTF& a) { return {{"num", poly_to_json(a.num())}, {"den", poly_to_json(a.den())}}; }

Polynomial poly_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw SpecError(where + ": coefficients must be an array");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw SpecError(where + ": coefficients must be numbers");
        c.push_back(v.get<double>());
    }
    return Polynomial(std::move(c));
}

RationalTF tf_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_object() || !j.contains("num")) throw SpecError(where + ": expected a number or {num, den}");
    const Polynomial num = poly_from_json(j.at("num"), where + ".num");
    const Polynomial den = j.contains("den") ? poly_from_json(j.at("den"), where + ".den") : Polynomial::constant(1.0);
    if (den.is_zero()) throw SpecError(where + ": zero denominator");
    return {num, den};
}

std::size_t parse_id(const std::string& key, std::size_t count, const std::string& where) {
    std::size_t id = 0;
    const auto* end = key.data() + key.size();
    const auto [ptr, ec] = std::from_chars(key.data(), end, id);
    if (ec != std::errc() || ptr != end || id < 1 || id > count) throw SpecError(where + ": invalid node id '" + key + "'");
    return id - 1;
}

std::map<std::size_t, RationalTF> tf_map_from_json(const json& node, const char* field, std::size_t count,
                                                   const std::string& where) {
    std::map<std::size_t, RationalTF> out;
    if (!node.contains(field)) return out;
    const auto& m = node.at(field);
    if (!m.is_object()) throw SpecError(where + "." + field + ": expected an object keyed by node id");
    for (const auto& [key, val] : m.items()) {
        const std::string at = where + "." + field + "." + key;
        out[parse_id(key, count, at)] = tf_from_json(val, at);
    }
    return out;
}

json tf_map_to_json(const std::map<std::size_t, RationalTF>& m) {
    json out = json::object();
    for (const auto& [j, tf] : m) out[std::to_string(j + 1)] = tf_to_json(tf);
    return out;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(what + " is not valid JSON: " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

NetworkSpec parse_network(const std::string& text) {
    const json doc = parse_json(text, "network");
    if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_array())
        throw SpecError("network: missing 'nodes' array");
    const auto& nodes = doc.at("nodes");
    const std::size_t count = nodes.size();
    if (count == 0) throw SpecError("network: no nodes");

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (doc.contains("edges")) {
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                throw SpecError("network: edges must be [i, j] pairs of node ids");
            const auto a = e[0].get<long long>();
            const auto b = e[1].get<long long>();
            if (a < 1 || b < 1 || a > static_cast<long long>(count) || b > static_cast<long long>(count))
                throw SpecError("network: edge endpoint out of range");
            edges.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
        }
    }

    NetworkSpec spec;
    spec.graph = Graph(count, edges);
    spec.subsystems.resize(count);
    spec.reference.resize(count);
    std::vector<bool> seen(count, false);
    for (std::size_t k = 0; k < count; ++k) {
        const auto& node = nodes[k];
        if (!node.is_object()) throw SpecError("network: node entries must be objects");
        std::size_t i = k;
        if (node.contains("id")) {
            if (!node.at("id").is_number_integer()) throw SpecError("network: node id must be an integer");
            i = parse_id(std::to_string(node.at("id").get<long long>()), count, "network.nodes");
        }
        if (seen[i]) throw SpecError("network: duplicate node id " + std::to_string(i + 1));
        seen[i] = true;
        const std::string where = "node " + std::to_string(i + 1);
        if (!node.contains("G") || !node.contains("T")) throw SpecError(where + ": G and T are required");
        auto& sub = spec.subsystems[i];
        sub.G = tf_from_json(node.at("G"), where + ".G");
        sub.W = tf_map_from_json(node, "W", count, where);
        sub.F = tf_map_from_json(node, "F", count, where);
        auto& ref = spec.reference[i];
        ref.T = tf_from_json(node.at("T"), where + ".T");
        ref.Q = tf_map_from_json(node, "Q", count, where);
        ref.P = tf_map_from_json(node, "P", count, where);
    }
    spec.check_structure();
    return spec;
}

NetworkSpec load_network(const std::filesystem::path& path) { return parse_network(read_text_file(path)); }

std::string network_to_json(const NetworkSpec& spec) {
    // One line per transfer-function field keeps files diffable.
    std::ostringstream os;
    os << "{\n  \"nodes\": [\n";
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const auto& sub = spec.subsystems[i];
        const auto& ref = spec.reference[i];
        std::vector<std::pair<std::string, json>> fields{{"G", tf_to_json(sub.G)}};
        if (!sub.W.empty()) fields.emplace_back("W", tf_map_to_json(sub.W));
        if (!sub.F.empty()) fields.emplace_back("F", tf_map_to_json(sub.F));
        fields.emplace_back("T", tf_to_json(ref.T));
        if (!ref.Q.empty()) fields.emplace_back("Q", tf_map_to_json(ref.Q));
        if (!ref.P.empty()) fields.emplace_back("P", tf_map_to_json(ref.P));
        os << "    {\n      \"id\": " << i + 1;
        for (const auto& [key, val] : fields) os << ",\n      \"" << key << "\": " << val.dump();
        os << "\n    }" << (i + 1 < spec.size() ? "," : "") << '\n';
    }
    os << "  ],\n  \"edges\": [";
    const auto& edges = spec.graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k)
        os << (k ? ", " : "") << '[' << edges[k].first + 1 << ", " << edges[k].second + 1 << ']';
    os << "]\n}\n";
    return os.str();
}

std::string controller_to_json(const SynthesisResult& result) {
    json nodes = json::array();
    json diag_nodes = json::array();
    for (std::size_t i = 0; i < result.controller.nodes.size(); ++i) {
        const auto& node = result.controller.nodes[i];
        json rho = json::array();
        if (i < result.rho.size())
            for (Eigen::Index k = 0; k < result.rho[i].size(); ++k) rho.push_back(result.rho[i](k));
        nodes.push_back({{"id", i + 1},
                         {"rho", rho},
                         {"C_ii", tf_to_json(node.diagonal)},
                         {"C_W", tf_map_to_json(node.coupling_w)},
                         {"C_Q", tf_map_to_json(node.coupling_q)}});
        if (i < result.fits.size()) {
            diag_nodes.push_back({{"id", i + 1},
                                  {"criterion", result.fits[i].criterion},
                                  {"gram_condition", result.fits[i].gram_condition}});
        }
    }
    json warnings = json::array();
    for (const auto& w : result.excitation.warnings) warnings.push_back(w);
    json doc = {{"class", result.cls.name},
                {"nodes", nodes},
                {"diagnostics", {{"nodes", diag_nodes}, {"warnings", warnings}}}};
    return doc.dump(2) + "\n";
}

DistributedController parse_controller(const std::string& text, const DistributedController& reference_rows) {
    const json doc = parse_json(text, "controller");
    if (!doc.is_object() || !doc.contains("nodes") || !doc.at("nodes").is_array())
        throw SpecError("controller: missing 'nodes' array");
    const std::size_t count = reference_rows.nodes.size();
    if (doc.at("nodes").size() != count) throw SpecError("controller: node count does not match the network");
    DistributedController out = reference_rows;
    for (const auto& node : doc.at("nodes")) {
        if (!node.is_object() || !node.contains("id") || !node.at("id").is_number_integer())
            throw SpecError("controller: node entries need an integer id");
        const std::size_t i = parse_id(std::to_string(node.at("id").get<long long>()), count, "controller.nodes");
        const std::string where = "controller node " + std::to_string(i + 1);
        if (!node.contains("C_ii")) throw SpecError(where + ": C_ii is required");
        auto& dst = out.nodes[i];
        dst.diagonal = tf_from_json(node.at("C_ii"), where + ".C_ii");
        dst.coupling_w = tf_map_from_json(node, "C_W", count, where);
        dst.coupling_q = tf_map_from_json(node, "C_Q", count, where);
    }
    return out;
}

DistributedController load_controller(const std::filesystem::path& path, const DistributedController& reference_rows) {
    return parse_controller(read_text_file(path), reference_rows);
}

std::string data_to_csv(const MultiSignal& u, const MultiSignal& y) {
    const std::size_t n = u.size();
    if (y.size() != n) throw DimensionError("u and y must have the same node count");
    const std::size_t len = n == 0 ? 0 : common_horizon(u);
    if (n > 0 && common_horizon(y) != len) throw DimensionError("u and y must share a horizon");
    std::ostringstream os;
    os << "t";
    for (std::size_t i = 0; i < n; ++i) os << ",u_" << i + 1;
    for (std::size_t i = 0; i < n; ++i) os << ",y_" << i + 1;
    os << '\n';
    for (std::size_t t = 0; t < len; ++t) {
        os << t;
        for (std::size_t i = 0; i < n; ++i) os << ',' << format_double(u[i][t]);
        for (std::size_t i = 0; i < n; ++i) os << ',' << format_double(y[i][t]);
        os << '\n';
    }
    return os.str();
}

IoData parse_data_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw SpecError("data: empty file");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            out.push_back(cell);
        }
        return out;
    };
    const auto header = split(line);
    if (header.size() < 3 || header[0] != "t" || (header.size() - 1) % 2 != 0)
        throw SpecError("data: header must be t,u_1..u_L,y_1..y_L");
    const std::size_t n = (header.size() - 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (header[1 + i] != "u_" + std::to_string(i + 1) || header[1 + n + i] != "y_" + std::to_string(i + 1))
            throw SpecError("data: header must be t,u_1..u_L,y_1..y_L");
    }
    std::vector<std::vector<double>> cols(2 * n);
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw SpecError("data: row " + std::to_string(row) + " has wrong column count");
        for (std::size_t c = 1; c < cells.size(); ++c) {
            double v = 0.0;
            const char* b = cells[c].data();
            const char* e = b + cells[c].size();
            const auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || ptr != e) throw SpecError("data: bad number '" + cells[c] + "' in row " + std::to_string(row));
            cols[c - 1].push_back(v);
        }
    }
    IoData data;
    for (std::size_t i = 0; i < n; ++i) data.u.emplace_back(std::move(cols[i]));
    for (std::size_t i = 0; i < n; ++i) data.y.emplace_back(std::move(cols[n + i]));
    return data;
}

IoData load_data_csv(const std::filesystem::path& path) { return parse_data_csv(read_text_file(path)); }

std::string virtual_to_csv(const VirtualData& vd) {
    std::ostringstream os;
    const std::size_t n = vd.r_bar.size();
    os << "t";
    for (std::size_t i = 0; i < n; ++i) os << ",r_bar_" << i + 1;
    for (std::size_t i = 0; i < n; ++i) os << ",e_bar_" << i + 1;
    for (const auto& [e, s] : vd.p_bar) os << ",p_bar_" << e.from + 1 << '_' << e.to + 1;
    for (const auto& [e, s] : vd.o_bar) os << ",o_bar_c_" << e.from + 1 << '_' << e.to + 1;
    os << '\n';
    for (std::size_t t = 0; t < vd.horizon; ++t) {
        os << t;
        for (const auto& s : vd.r_bar) os << ',' << format_double(s[t]);
        for (const auto& s : vd.e_bar) os << ',' << format_double(s[t]);
        for (const auto& [e, s] : vd.p_bar) os << ',' << format_double(s[t]);
        for (const auto& [e, s] : vd.o_bar) os << ',' << format_double(s[t]);
        os << '\n';
    }
    return os.str();
}

std::string replicates_to_csv(const std::vector<ReplicateRecord>& records) {
    std::ostringstream os;
    os << "seed,class,metric,J_MR,ok\n";
    for (const auto& r : records)
        os << r.seed << ',' << r.cls << ',' << format_double(r.metric) << ',' << format_double(r.jmr) << ','
           << (r.ok ? 1 : 0) << '\n';
    return os.str();
}

std::string summary_to_csv(const std::vector<ClassSummary>& summaries) {
    std::ostringstream os;
    os << "class,count,failures,min,q1,median,q3,max,median_J_MR\n";
    for (const auto& s : summaries)
        os << s.cls << ',' << s.count << ',' << s.failures << ',' << format_double(s.min) << ',' << format_double(s.q1)
           << ',' << format_double(s.median) << ',' << format_double(s.q3) << ',' << format_double(s.max) << ','
           << format_double(s.median_jmr) << '\n';
    return os.str();
}

std::string trace_to_csv(const std::vector<std::string>& labels, const std::vector<StepTrace>& traces) {
    if (labels.size() != traces.size()) throw DimensionError("one label per trace required");
    std::ostringstream os;
    os << "controller,t,node,r,y,y_d,u\n";
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const auto& tr = traces[k];
        for (std::size_t i = 0; i < tr.y.size(); ++i)
            for (std::size_t t = 0; t < tr.y[i].size(); ++t)
                os << labels[k] << ',' << t << ',' << i + 1 << ',' << format_double(tr.r[i][t]) << ','
                   << format_double(tr.y[i][t]) << ',' << format_double(tr.y_d[i][t]) << ','
                   << format_double(tr.u[i][t]) << '\n';
    }
    return os.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace distvrft
