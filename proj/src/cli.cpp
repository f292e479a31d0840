#include "cstar/cli.hpp"

#include <CLI11.hpp>

#include <sstream>

#include "cstar/io.hpp"

namespace cstar {

namespace {

struct Options {
    std::string pi_path;
    std::string vol_path;
    std::string table_path;
    std::string out_path;
    std::string format = "json";
    std::string f, g;
    std::vector<double> alphas;
    std::vector<double> other_alphas;
    int n = 1;
    int m = 2;
    int edges = -1;
    int order = 2;
    int trials = 20;
    int threads = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 1e-3;
};

struct LoadedFile {
    std::string path;
    std::string hash;
    Json json;
};

LoadedFile load(const std::string& path)
{
    std::string text = read_text_file(path);
    return LoadedFile{path, fnv1a_hex(text), parse_json(text, path)};
}

class Session {
public:
    Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

    PolyVector pi()
    {
        if (opt_.pi_path.empty()) {
            throw CLI::ValidationError("--pi is required");
        }
        auto file = load(opt_.pi_path);
        inputs_["pi"] = Json{{"path", file.path}, {"fnv1a", file.hash}};
        return polyvector_from_json(file.json);
    }

    VolumeForm volume(int dim)
    {
        if (opt_.vol_path.empty()) {
            inputs_["vol"] = Json{{"path", nullptr}, {"log_density", "0"}};
            return VolumeForm::constant(dim);
        }
        auto file = load(opt_.vol_path);
        inputs_["vol"] = Json{{"path", file.path}, {"fnv1a", file.hash}};
        VolumeForm vol = volume_from_json(file.json);
        if (vol.dim() != dim) {
            throw DimensionError("volume form has dim " + std::to_string(vol.dim()) + ", bivector has dim " +
                                 std::to_string(dim));
        }
        return vol;
    }

    WeightTable table(bool builtin_default = true)
    {
        WeightTable t;
        Json origin;
        if (!opt_.table_path.empty()) {
            auto file = load(opt_.table_path);
            t = table_from_json(file.json);
            origin = Json{{"path", file.path}, {"fnv1a", file.hash}};
        } else if (builtin_default) {
            t = builtin_exact_table();
            origin = Json{{"path", "builtin"}};
        } else {
            origin = Json{{"path", nullptr}};
        }
        note_table(t, origin);
        return t;
    }

    void note_table(const WeightTable& t, Json origin)
    {
        origin["provenance"] = t.provenance();
        origin["entries"] = t.entries().size();
        origin["content_fnv1a"] = fnv1a_hex(dump(to_json(t)));
        std::int64_t samples = 0;
        Json seeds = Json::array();
        for (const auto& e : t.entries()) {
            if (!e.is_exact()) {
                samples = std::max(samples, e.samples);
                if (std::find(seeds.begin(), seeds.end(), Json(e.seed)) == seeds.end()) {
                    seeds.push_back(e.seed);
                }
            }
        }
        if (samples > 0) {
            origin["max_samples"] = samples;
            origin["seeds"] = seeds;
        }
        weights_ = origin;
    }

    int emit_report(const std::string& command, const CheckReport& report)
    {
        Json doc{{"command", command}, {"inputs", inputs_}};
        if (!weights_.is_null()) {
            doc["weights"] = weights_;
        }
        Json body = to_json(report);
        for (const auto& [k, v] : body.items()) {
            doc[k] = v;
        }
        if (opt_.format == "text") {
            std::ostringstream text;
            text << command << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
            for (const auto& o : report.orders) {
                text << "  order " << o.order << ": " << (o.pass ? "pass" : "FAIL");
                if (!o.pass || o.residual != "0") {
                    text << "  residual: " << o.residual;
                }
                text << "\n";
            }
            for (const auto& note : report.notes) {
                text << "  note: " << note << "\n";
            }
            write_inputs_text(text);
            write(text.str());
        } else {
            write(dump(doc));
        }
        return report.pass ? kExitPass : kExitCheckFailed;
    }

    void write(const std::string& text)
    {
        if (opt_.out_path.empty()) {
            out_ << text;
        } else {
            write_text_file(opt_.out_path, text);
        }
    }

    Json& inputs() { return inputs_; }
    const Json& weights() const { return weights_; }

    void write_inputs_text(std::ostream& text) const
    {
        for (const auto& [name, info] : inputs_.items()) {
            text << "  input " << name << ": " << info.dump() << "\n";
        }
        if (!weights_.is_null()) {
            text << "  weights: " << weights_.dump() << "\n";
        }
    }

private:
    const Options& opt_;
    std::ostream& out_;
    Json inputs_ = Json::object();
    Json weights_;
};

std::string alpha_text(const std::vector<double>& alphas)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        out << (i ? "," : "") << alphas[i];
    }
    return out.str();
}

int graphs_enumerate(const Options& opt, Session& session)
{
    int edges = opt.edges >= 0 ? opt.edges : 2 * opt.n + opt.m - 3;
    auto graphs = enumerate(opt.n, opt.m, edges);
    if (opt.format == "text") {
        std::ostringstream text;
        text << graphs.size() << " graphs (n=" << opt.n << ", m=" << opt.m << ", edges=" << edges << ")\n";
        for (const auto& g : graphs) {
            text << canonical_key(g) << "\n";
        }
        session.write(text.str());
    } else {
        session.write(dump(to_json(graphs)));
    }
    return kExitPass;
}

int weights_compute(const Options& opt, Session& session, bool seed_given)
{
    if (opt.samples <= 0) {
        throw CLI::ValidationError("--samples must be positive");
    }
    if (!seed_given) {
        throw CLI::ValidationError("--seed is required when sampling");
    }
    SamplerOptions so{opt.samples, opt.seed, opt.threads};
    WeightTable table;
    if (opt.m == 2 && opt.alphas.empty()) {
        for (const auto& g : star_graphs(opt.n, 2)) {
            table.insert(star_weight(g, so));
        }
    } else {
        std::vector<double> alphas = opt.alphas;
        if (alphas.empty()) {
            alphas.assign(opt.m, 0.0);
            alphas.back() = 1.0;
        }
        if (static_cast<int>(alphas.size()) != opt.m) {
            throw CLI::ValidationError("--alpha needs " + std::to_string(opt.m) + " values");
        }
        AngleContext ctx = AngleContext::standard(alphas);
        auto graphs = opt.m == 3 ? star_graphs(opt.n, 3) : enumerate(opt.n, opt.m, 2 * opt.n + opt.m - 3);
        for (const auto& g : graphs) {
            table.insert(weight(g, ctx, so));
        }
    }
    if (opt.format == "text") {
        std::ostringstream text;
        for (const auto& e : table.entries()) {
            char buf[128];
            std::snprintf(buf, sizeof buf, " %+.6f +- %.6f", e.value, e.std_error);
            text << e.graph_key << " [" << alpha_text(e.alphas) << "]" << buf << " (samples " << e.samples
                 << ", seed " << e.seed << ", rejected " << e.rejected << ")\n";
        }
        session.write(text.str());
    } else {
        session.write(dump(to_json(table)));
    }
    return kExitPass;
}

int star_apply_command(const Options& opt, Session& session)
{
    PolyVector pi = session.pi();
    WeightTable table = session.table();
    StarProduct s = assemble_star(pi, table, opt.order);
    Polynomial f = parse_polynomial(opt.f, pi.dim());
    Polynomial g = parse_polynomial(opt.g, pi.dim());
    auto coeffs = star_apply(s, f, g);
    Json list = Json::array();
    for (const auto& c : coeffs) {
        list.push_back(render(c));
    }
    if (opt.format == "text") {
        std::ostringstream text;
        text << "(" << render(f) << ") * (" << render(g) << ")\n";
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
            text << "  hbar^" << n << ": " << render(coeffs[n]) << "\n";
        }
        session.write_inputs_text(text);
        session.write(text.str());
    } else {
        Json doc{{"command", "star apply"}, {"inputs", session.inputs()}, {"weights", session.weights()},
                 {"f", render(f)},          {"g", render(g)},             {"order", opt.order},
                 {"exact", s.exact},        {"coefficients", list}};
        session.write(dump(doc));
    }
    return kExitPass;
}

int check_command(const std::string& which, const Options& opt, Session& session, bool seed_given)
{
    const std::string command = "check " + which;
    PolyVector pi = session.pi();
    if (which == "jacobi") {
        if (pi.arity() != 2) {
            throw std::invalid_argument("check jacobi expects a bivector field");
        }
        PolyVector jac = schouten(pi, pi);
        CheckReport r{"jacobi", jac.is_zero(), {{0, jac.is_zero(), render(jac), std::nullopt}}, {}};
        r.notes.push_back("residual is [pi,pi]");
        return session.emit_report(command, r);
    }
    VolumeForm vol = session.volume(pi.dim());
    if (which == "divergence") {
        PolyVector div = divergence(pi, vol);
        CheckReport r{"divergence", div.is_zero(), {{0, div.is_zero(), render(div), std::nullopt}}, {}};
        r.notes.push_back("residual is div_vol(pi)");
        return session.emit_report(command, r);
    }
    if (which == "alpha") {
        if (opt.alphas.size() != 3 || opt.other_alphas.size() != 3) {
            throw CLI::ValidationError("--alpha and --against need three values each");
        }
        WeightTable table = opt.table_path.empty() ? WeightTable{} : session.table(false);
        bool missing = false;
        for (const auto* a : {&opt.alphas, &opt.other_alphas}) {
            for (const auto& g : star_graphs(opt.order, 3)) {
                missing = missing || !table.find(canonical_key(g), *a);
            }
        }
        if (missing) {
            if (opt.samples <= 0 || !seed_given) {
                throw CLI::ValidationError("weights missing from the table: pass --samples and --seed");
            }
            SamplerOptions so{opt.samples, opt.seed, opt.threads};
            complete_trilinear_table(table, opt.alphas, opt.order, so);
            complete_trilinear_table(table, opt.other_alphas, opt.order, so);
            Json origin{{"path", opt.table_path.empty() ? Json(nullptr) : Json(opt.table_path)},
                        {"computed_samples", opt.samples},
                        {"computed_seed", opt.seed}};
            session.note_table(table, origin);
        }
        CheckReport r = check_alpha_independence(pi, opt.alphas, opt.other_alphas, table, opt.order, vol,
                                                 opt.tolerance);
        return session.emit_report(command, r);
    }
    WeightTable table = session.table();
    StarProduct s = assemble_star(pi, table, opt.order);
    if (which == "cyclic") {
        return session.emit_report(command, check_cyclic(s, vol));
    }
    if (which == "closed") {
        return session.emit_report(command, check_closed(s, vol));
    }
    if (which == "unital") {
        return session.emit_report(command, check_unital(s));
    }
    std::uint64_t seed = seed_given ? opt.seed : 1;
    session.inputs()["seed"] = seed;
    return session.emit_report(command, check_associative(s, opt.trials, seed));
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Kontsevich star products, graph weights and cyclicity checks"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("--out", opt.out_path, "Write the output to this file instead of stdout");
    };

    auto* graphs = app.add_subcommand("graphs", "Admissible graphs")->require_subcommand(1);
    auto* enumerate_cmd = graphs->add_subcommand("enumerate", "List labeled admissible graphs");
    enumerate_cmd->add_option("--n", opt.n, "Internal vertices")->required();
    enumerate_cmd->add_option("--m", opt.m, "Boundary vertices")->required();
    enumerate_cmd->add_option("--edges", opt.edges, "Edge count (default 2n+m-3)");
    add_format(enumerate_cmd);

    auto* weights = app.add_subcommand("weights", "Graph weights")->require_subcommand(1);
    auto* compute = weights->add_subcommand("compute", "Monte Carlo weights of top-degree graphs");
    compute->add_option("--n", opt.n, "Internal vertices")->required();
    compute->add_option("--m", opt.m, "Boundary vertices")->required();
    compute->add_option("--alpha", opt.alphas, "Comma-separated alpha vector (default 0,...,0,1)")
        ->delimiter(',');
    compute->add_option("--samples", opt.samples, "Samples per graph")->required();
    auto* compute_seed = compute->add_option("--seed", opt.seed, "Sampler seed");
    compute->add_option("--threads", opt.threads, "Worker threads (default CSTAR_THREADS or all cores)");
    add_format(compute);
    auto* builtin = weights->add_subcommand("builtin", "Print the built-in exact weight table");
    add_format(builtin);

    auto* star = app.add_subcommand("star", "Star products")->require_subcommand(1);
    auto* apply_cmd = star->add_subcommand("apply", "Coefficients of f * g through the given order");
    apply_cmd->add_option("--pi", opt.pi_path, "Poisson bivector JSON")->required();
    apply_cmd->add_option("--f", opt.f, "First polynomial")->required();
    apply_cmd->add_option("--g", opt.g, "Second polynomial")->required();
    apply_cmd->add_option("--order", opt.order, "Truncation order");
    apply_cmd->add_option("--table", opt.table_path, "Weight table JSON (default: built-in exact table)");
    add_format(apply_cmd);

    auto* check = app.add_subcommand("check", "Verification checks")->require_subcommand(1);
    std::map<std::string, CLI::Option*> check_seeds;
    for (const char* name : {"jacobi", "divergence", "cyclic", "closed", "assoc", "unital", "alpha"}) {
        auto* c = check->add_subcommand(name, std::string("Run the ") + name + " check");
        c->add_option("--pi", opt.pi_path, "Bivector JSON")->required();
        add_format(c);
        std::string which = name;
        if (which == "jacobi") {
            continue;
        }
        c->add_option("--vol", opt.vol_path, "Volume form JSON (default: constant)");
        if (which == "divergence") {
            continue;
        }
        c->add_option("--order", opt.order, "Truncation order");
        c->add_option("--table", opt.table_path, "Weight table JSON");
        if (which == "assoc") {
            c->add_option("--trials", opt.trials, "Random triples");
            check_seeds[which] = c->add_option("--seed", opt.seed, "Seed for the random triples");
        }
        if (which == "alpha") {
            c->add_option("--alpha", opt.alphas, "First alpha vector")->delimiter(',')->required();
            c->add_option("--against", opt.other_alphas, "Second alpha vector")->delimiter(',')->required();
            c->add_option("--samples", opt.samples, "Samples per missing weight");
            check_seeds[which] = c->add_option("--seed", opt.seed, "Sampler seed");
            c->add_option("--threads", opt.threads, "Worker threads");
            c->add_option("--tolerance", opt.tolerance, "Absolute tolerance floor per coefficient")
                ->check(CLI::NonNegativeNumber);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    Session session(opt, out);
    try {
        if (enumerate_cmd->parsed()) {
            return graphs_enumerate(opt, session);
        }
        if (compute->parsed()) {
            return weights_compute(opt, session, compute_seed->count() > 0);
        }
        if (builtin->parsed()) {
            WeightTable t = builtin_exact_table();
            session.write(dump(to_json(t)));
            return kExitPass;
        }
        if (apply_cmd->parsed()) {
            return star_apply_command(opt, session);
        }
        for (auto* c : check->get_subcommands()) {
            std::string which = c->get_name();
            if (which == "alpha" && opt.order == 2 && c->count("--order") == 0) {
                opt.order = 1;
            }
            bool seed_given = check_seeds.count(which) && check_seeds[which]->count() > 0;
            return check_command(which, opt, session, seed_given);
        }
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no command\n";
    return kExitUsage;
}

} // namespace cstar
