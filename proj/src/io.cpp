#include "cstar/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cstar {

namespace {

template <typename T>
T field(const Json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name)) {
        throw FormatError(std::string("missing field '") + name + "'");
    }
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field '") + name + "' has the wrong type");
    }
}

std::vector<int> parse_axes(const std::string& key, int dim)
{
    std::vector<int> axes;
    if (key.empty()) {
        return axes;
    }
    std::stringstream in(key);
    std::string part;
    while (std::getline(in, part, ',')) {
        int a = 0;
        try {
            std::size_t used = 0;
            a = std::stoi(part, &used);
            if (used != part.size()) {
                throw std::invalid_argument(part);
            }
        } catch (const std::exception&) {
            throw FormatError("bad component key '" + key + "'");
        }
        if (a < 1 || a > dim) {
            throw FormatError("component axis out of range in '" + key + "'");
        }
        axes.push_back(a - 1);
    }
    return axes;
}

std::string axes_key(const AxisSet& axes)
{
    std::string out;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        out += (i ? "," : "") + std::to_string(axes[i] + 1);
    }
    return out;
}

} // namespace

Json to_json(const PolyVector& v)
{
    Json comps = Json::object();
    for (const auto& [key, coeff] : v.components()) {
        comps[axes_key(key)] = render(coeff);
    }
    return Json{{"dim", v.dim()}, {"degree", v.degree()}, {"components", comps}};
}

PolyVector polyvector_from_json(const Json& j)
{
    int dim = field<int>(j, "dim");
    int degree = field<int>(j, "degree");
    if (dim <= 0) {
        throw FormatError("dim must be positive");
    }
    if (degree < -1) {
        throw FormatError("degree must be >= -1");
    }
    PolyVector v(dim, degree + 1);
    const Json& comps = j.contains("components") ? j.at("components") : Json::object();
    if (!comps.is_object()) {
        throw FormatError("'components' must be an object");
    }
    for (const auto& [key, value] : comps.items()) {
        auto axes = parse_axes(key, dim);
        if (static_cast<int>(axes.size()) != degree + 1) {
            throw FormatError("component key '" + key + "' does not match degree " + std::to_string(degree));
        }
        if (!value.is_string()) {
            throw FormatError("component '" + key + "' must be a polynomial string");
        }
        v.add(axes, parse_polynomial(value.get<std::string>(), dim));
    }
    return v;
}

Json to_json(const VolumeForm& vol)
{
    return Json{{"dim", vol.dim()}, {"log_density", render(vol.log_density)}};
}

VolumeForm volume_from_json(const Json& j)
{
    int dim = field<int>(j, "dim");
    if (dim <= 0) {
        throw FormatError("dim must be positive");
    }
    std::string rho = j.contains("log_density") ? field<std::string>(j, "log_density") : "0";
    return VolumeForm{parse_polynomial(rho, dim)};
}

Json to_json(const PolyDiffOperator& psi)
{
    Json terms = Json::array();
    for (const auto& [key, coeff] : psi.terms()) {
        terms.push_back(Json{{"coeff", render(coeff)}, {"indices", key}});
    }
    return Json{{"dim", psi.dim()}, {"arity", psi.arity()}, {"terms", terms}};
}

PolyDiffOperator operator_from_json(const Json& j)
{
    int dim = field<int>(j, "dim");
    int arity = field<int>(j, "arity");
    if (dim <= 0 || arity < 0) {
        throw FormatError("bad operator dim or arity");
    }
    PolyDiffOperator psi(dim, arity);
    for (const auto& t : j.value("terms", Json::array())) {
        auto indices = field<PolyDiffOperator::Key>(t, "indices");
        psi.add_term(indices, parse_polynomial(field<std::string>(t, "coeff"), dim));
    }
    return psi;
}

Json to_json(const std::vector<AdmissibleGraph>& graphs)
{
    Json out = Json::array();
    for (const auto& g : graphs) {
        Json stars = Json::array();
        for (const auto& s : g.stars()) {
            Json star = Json::array();
            for (const auto& t : s) {
                star.push_back(target_label(t));
            }
            stars.push_back(star);
        }
        out.push_back(Json{{"n", g.internal_count()}, {"m", g.boundary_count()}, {"stars", stars}});
    }
    return out;
}

std::vector<AdmissibleGraph> graphs_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw FormatError("graph list must be an array");
    }
    std::vector<AdmissibleGraph> out;
    for (const auto& g : j) {
        int n = field<int>(g, "n");
        int m = field<int>(g, "m");
        auto labels = field<std::vector<std::vector<std::string>>>(g, "stars");
        std::vector<std::vector<Target>> stars;
        for (const auto& s : labels) {
            std::vector<Target> star;
            for (const auto& l : s) {
                star.push_back(parse_target(l, n, m));
            }
            stars.push_back(std::move(star));
        }
        out.emplace_back(n, m, std::move(stars));
    }
    return out;
}

Json to_json(const WeightTable& table)
{
    Json entries = Json::array();
    for (const auto& e : table.entries()) {
        Json row{{"graph", e.graph_key},       {"alphas", e.alphas},   {"value", e.value},
                 {"std_error", e.std_error},   {"samples", e.samples}, {"seed", e.seed},
                 {"rejected", e.rejected}};
        row["exact"] = e.exact ? Json(render(*e.exact)) : Json(nullptr);
        entries.push_back(std::move(row));
    }
    return Json{{"entries", entries}};
}

WeightTable table_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array()) {
        throw FormatError("weight table needs an 'entries' array");
    }
    WeightTable table;
    for (const auto& row : j.at("entries")) {
        WeightEntry e;
        e.graph_key = field<std::string>(row, "graph");
        graph_from_key(e.graph_key);
        e.alphas = row.contains("alphas") ? field<std::vector<double>>(row, "alphas") : std::vector<double>{};
        if (row.contains("exact") && !row.at("exact").is_null()) {
            Rational q;
            std::string text = field<std::string>(row, "exact");
            if (q.set_str(text, 10) != 0) {
                throw FormatError("bad exact weight '" + text + "'");
            }
            q.canonicalize();
            e = WeightEntry::from_exact(e.graph_key, e.alphas, q);
        } else {
            e.value = field<double>(row, "value");
            e.std_error = row.value("std_error", 0.0);
            e.samples = row.value("samples", std::int64_t{0});
            e.seed = row.value("seed", std::uint64_t{0});
            e.rejected = row.value("rejected", std::int64_t{0});
            if (e.std_error < 0) {
                throw FormatError("negative std_error for " + e.graph_key);
            }
        }
        table.insert(std::move(e));
    }
    return table;
}

Json to_json(const StarProduct& s)
{
    Json levels = Json::array();
    for (const auto& l : s.levels) {
        levels.push_back(to_json(l));
    }
    return Json{{"pi", to_json(s.pi)},
                {"order", s.order},
                {"weight_source", s.weight_source},
                {"exact", s.exact},
                {"levels", levels}};
}

Json to_json(const CheckReport& report)
{
    Json orders = Json::array();
    for (const auto& o : report.orders) {
        orders.push_back(Json{{"order", o.order}, {"pass", o.pass}, {"residual", o.residual}});
    }
    return Json{{"check", report.check}, {"pass", report.pass}, {"orders", orders}, {"notes", report.notes}};
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

Json parse_json(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(origin + ": " + e.what());
    }
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

} // namespace cstar
