// Command-line front end: model ingestion, chain-recurrence computations and
// deterministic CSV/JSON/DOT exports.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <chainrec/chainrec.hpp>

using namespace chainrec;

namespace {

struct ModelOptions {
    std::string input;
    std::string catalog;
    std::size_t cells = 0;
    std::vector<std::string> params;
};

struct LoadedModel {
    SpaceModel space;
    Relation relation;
    double resolution = 0.0; // 0 for hand-written models
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
    auto* in = cmd->add_option("--input", opts.input, "model document (canonical JSON)");
    auto* cat = cmd->add_option("--catalog", opts.catalog, "catalog model name");
    cmd->add_option("--cells", opts.cells, "cell count for catalog models");
    cmd->add_option("--param", opts.params, "catalog parameter key=value (repeatable)");
    in->excludes(cat);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto pos = kv.find('=');
        if (pos == std::string::npos) throw ParamError("expected key=value, got: " + kv);
        try {
            out[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
        } catch (const std::invalid_argument&) {
            throw ParamError("parameter value is not a number: " + kv);
        }
    }
    return out;
}

LoadedModel resolve_model(const ModelOptions& opts) {
    if (!opts.input.empty()) {
        std::ifstream in(opts.input);
        if (!in) throw SchemaError("cannot open " + opts.input);
        std::stringstream buf;
        buf << in.rdbuf();
        Model m = load_space(buf.str());
        return LoadedModel{std::move(m.space), std::move(m.relation), 0.0};
    }
    if (!opts.catalog.empty()) {
        GridModel g = build_catalog_model(opts.catalog, opts.cells, parse_params(opts.params));
        return LoadedModel{std::move(g.space), std::move(g.relation), g.resolution};
    }
    throw ParamError("pass --input or --catalog");
}

double resolve_eps(const std::string& eps_text, const LoadedModel& model) {
    if (eps_text == "auto") return model.resolution; // one cell on grids, 0 otherwise
    try {
        return std::stod(eps_text);
    } catch (const std::invalid_argument&) {
        throw ParamError("eps must be a number or auto");
    }
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParamError("cannot write " + out_path);
    out << text;
}

BarrierKind parse_kind(const std::string& kind) {
    if (kind == "m") return BarrierKind::bound;
    if (kind == "l") return BarrierKind::length;
    if (kind == "M") return BarrierKind::bound_anchored;
    if (kind == "L") return BarrierKind::length_anchored;
    if (kind == "sm") return BarrierKind::sym_bound;
    if (kind == "sl") return BarrierKind::sym_length;
    throw KindError("kind must be one of m, l, M, L, sm, sl");
}

ChainKind parse_chain_kind(const std::string& kind) {
    if (kind == "m") return ChainKind::conley;
    if (kind == "l") return ChainKind::aubry;
    throw KindError("kind must be m or l");
}

Json structure_json(const SpaceModel& space, const ChainStructure& cs) {
    Json::Object o;
    o["eps"] = Json(cs.eps);
    o["kind"] = Json(std::string(to_string(cs.kind)));
    o["recurrent"] = Json::index_set(cs.recurrent);
    o["components"] = partition_json(cs.components);
    Json nodes = Json::array();
    for (const auto& node : cs.condensation) {
        Json::Object n;
        n["members"] = Json::index_set(node.members);
        n["recurrent"] = Json(node.recurrent);
        n["label"] = Json(space.label(node.members.front()));
        nodes.push_back(Json(std::move(n)));
    }
    o["condensation_nodes"] = std::move(nodes);
    Json edges = Json::array();
    for (const auto& [a, b] : cs.condensation_edges) {
        Json::Array e;
        e.emplace_back(a);
        e.emplace_back(b);
        edges.push_back(Json(std::move(e)));
    }
    o["condensation_edges"] = std::move(edges);
    return Json(std::move(o));
}

int run_verify(const LoadedModel& model, double eps, unsigned threads);

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chain-recurrence analysis of finite relation dynamics"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker cap for row-parallel computations");

    ModelOptions barrier_model;
    std::string barrier_kind = "m", barrier_out;
    auto* cmd_barrier = app.add_subcommand("barrier", "all-pairs barrier matrix as CSV");
    add_model_options(cmd_barrier, barrier_model);
    cmd_barrier->add_option("--kind", barrier_kind, "m, l, M, L, sm or sl");
    cmd_barrier->add_option("--out", barrier_out, "output path (default stdout)");

    ModelOptions comp_model;
    std::string comp_eps = "auto", comp_kind = "m", comp_out, comp_format = "json";
    auto* cmd_comp = app.add_subcommand("components", "chain components and condensation");
    add_model_options(cmd_comp, comp_model);
    cmd_comp->add_option("--eps", comp_eps, "chain tolerance or auto");
    cmd_comp->add_option("--kind", comp_kind, "m or l");
    cmd_comp->add_option("--format", comp_format, "json or dot");
    cmd_comp->add_option("--out", comp_out, "output path");

    ModelOptions quot_model;
    std::string quot_kind = "m", quot_out, quot_format = "json";
    auto* cmd_quot = app.add_subcommand("quotient", "quotient (ultra)metric of the recurrent set");
    add_model_options(cmd_quot, quot_model);
    cmd_quot->add_option("--kind", quot_kind, "m or l");
    cmd_quot->add_option("--format", quot_format, "json or csv");
    cmd_quot->add_option("--out", quot_out, "output path");

    ModelOptions lyap_model;
    std::string lyap_kind = "m", lyap_out, lyap_report;
    std::int64_t lyap_base = -1;
    auto* cmd_lyap = app.add_subcommand("lyapunov", "Lyapunov function values as CSV");
    add_model_options(cmd_lyap, lyap_model);
    cmd_lyap->add_option("--kind", lyap_kind, "m or l");
    cmd_lyap->add_option("--base", lyap_base,
                         "base point for the pointwise function (default: complete function)");
    cmd_lyap->add_option("--report", lyap_report, "also write a JSON level-set report here");
    cmd_lyap->add_option("--out", lyap_out, "output path");

    ModelOptions attr_model;
    std::string attr_eps = "0", attr_out, attr_format = "json";
    std::size_t attr_cap = 16;
    auto* cmd_attr = app.add_subcommand("attractors", "attractor lattice with duals");
    add_model_options(cmd_attr, attr_model);
    cmd_attr->add_option("--eps", attr_eps, "chain tolerance or auto");
    cmd_attr->add_option("--lattice-cap", attr_cap, "maximum recurrent component count");
    cmd_attr->add_option("--format", attr_format, "json or dot");
    cmd_attr->add_option("--out", attr_out, "output path");

    ModelOptions mix_model;
    std::string mix_eps = "auto", mix_out, mix_witness;
    auto* cmd_mix = app.add_subcommand("mixing", "chain transitivity and mixing report");
    add_model_options(cmd_mix, mix_model);
    cmd_mix->add_option("--eps", mix_eps, "chain tolerance or auto");
    cmd_mix->add_option("--witness", mix_witness, "write the cyclic factor as CSV here");
    cmd_mix->add_option("--out", mix_out, "output path");

    ModelOptions mane_model;
    std::string mane_eps = "auto", mane_out, mane_res = "auto";
    std::size_t mane_period = 0;
    auto* cmd_mane = app.add_subcommand("mane", "cyclic-set estimate via the fixed-set formula");
    add_model_options(cmd_mane, mane_model);
    cmd_mane->add_option("--resolution", mane_res, "interior radius or auto (model resolution)");
    cmd_mane->add_option("--eps", mane_eps, "chain tolerance or auto");
    cmd_mane->add_option("--max-period", mane_period, "also report cyclic sets of powers up to P");
    cmd_mane->add_option("--out", mane_out, "output path");

    std::string disc_map = "identity", disc_geom = "circle:1", disc_mode = "nearest", disc_out;
    std::string disc_times_map, disc_times_geom = "circle:1";
    std::vector<std::string> disc_params, disc_times_params;
    std::size_t disc_cells = 64, disc_times_cells = 0;
    double disc_rho = -1.0;
    auto* cmd_disc = app.add_subcommand("discretize", "emit a grid model as canonical JSON");
    cmd_disc->add_option("--map", disc_map, "map name (see models list)");
    cmd_disc->add_option("--param", disc_params, "map parameter key=value (repeatable)");
    cmd_disc->add_option("--geometry", disc_geom, "interval:lo:hi or circle:c");
    cmd_disc->add_option("--cells", disc_cells, "grid size");
    cmd_disc->add_option("--mode", disc_mode, "nearest or outer");
    cmd_disc->add_option("--rho", disc_rho, "outer radius (default: one cell)");
    cmd_disc->add_option("--times-map", disc_times_map,
                         "second factor map; builds the max-metric product (torus for two circles)");
    cmd_disc->add_option("--times-geometry", disc_times_geom, "second factor geometry");
    cmd_disc->add_option("--times-cells", disc_times_cells, "second factor grid size");
    cmd_disc->add_option("--times-param", disc_times_params, "second factor parameter key=value");
    cmd_disc->add_option("--out", disc_out, "output path");

    auto* cmd_models = app.add_subcommand("models", "catalog utilities");
    auto* cmd_models_list = cmd_models->add_subcommand("list", "list catalog models");

    ModelOptions verify_model;
    std::string verify_eps = "auto";
    auto* cmd_verify = app.add_subcommand("verify", "run the invariant suite on a model");
    add_model_options(cmd_verify, verify_model);
    cmd_verify->add_option("--eps", verify_eps, "chain tolerance or auto");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_barrier->parsed()) {
            LoadedModel m = resolve_model(barrier_model);
            const BarrierKind kind = parse_kind(barrier_kind);
            BarrierMatrix b;
            if (is_symmetric_kind(kind))
                b = symmetrize(barrier(m.space, m.relation,
                                       kind == BarrierKind::sym_bound ? BarrierKind::bound
                                                                      : BarrierKind::length,
                                       threads));
            else if (is_anchored_kind(kind))
                b = barrier_asymmetric(m.space, m.relation, kind, threads);
            else
                b = barrier(m.space, m.relation, kind, threads);
            emit(barrier_out, matrix_csv(m.space, b.values));
        } else if (cmd_comp->parsed()) {
            LoadedModel m = resolve_model(comp_model);
            const double eps = resolve_eps(comp_eps, m);
            ChainStructure cs = chain_structure(m.space, m.relation, eps,
                                                parse_chain_kind(comp_kind));
            if (comp_format == "dot")
                emit(comp_out, condensation_dot(m.space, cs));
            else
                emit(comp_out, structure_json(m.space, cs).dump() + "\n");
        } else if (cmd_quot->parsed()) {
            LoadedModel m = resolve_model(quot_model);
            ChainStructure cs =
                chain_structure(m.space, m.relation, 0.0, parse_chain_kind(quot_kind));
            QuotientSpace q = quotient(m.space, cs);
            if (quot_format == "csv") {
                std::ostringstream os;
                for (Index j = 0; j < q.classes.size(); ++j) {
                    if (j) os << ',';
                    os << m.space.label(q.classes[j].front());
                }
                os << '\n';
                for (Index i = 0; i < q.qdist.size(); ++i) {
                    for (Index j = 0; j < q.qdist.size(); ++j) {
                        if (j) os << ',';
                        os << fmt_g12(q.qdist.at(i, j));
                    }
                    os << '\n';
                }
                emit(quot_out, os.str());
            } else {
                Json::Object o;
                o["kind"] = Json(std::string(to_string(q.kind)));
                o["carrier"] = Json::index_set(q.carrier);
                o["classes"] = partition_json(q.classes);
                o["qdist"] = Json::matrix(q.qdist);
                emit(quot_out, Json(std::move(o)).dump() + "\n");
            }
        } else if (cmd_lyap->parsed()) {
            LoadedModel m = resolve_model(lyap_model);
            const ChainKind kind = parse_chain_kind(lyap_kind);
            LyapunovFn fn;
            if (lyap_base >= 0)
                fn = pointwise_lyapunov(m.space, m.relation, static_cast<Index>(lyap_base), kind);
            else
                fn = complete_lyapunov(m.space, m.relation, kind);
            emit(lyap_out, values_csv(m.space, fn.values));
            if (!lyap_report.empty()) {
                ChainStructure cs = chain_structure(m.space, m.relation, 0.0, kind);
                // level sets of the function, tied to condensation nodes
                std::map<std::string, Json::Array> levels;
                for (Index k = 0; k < cs.condensation.size(); ++k)
                    levels[fmt_g12(fn.values[cs.condensation[k].members.front()])].emplace_back(k);
                Json::Object rep;
                rep["eps"] = Json(0.0);
                rep["kind"] = Json(std::string(to_string(kind)));
                Json::Object lv;
                for (auto& [value, nodes] : levels) lv[value] = Json(std::move(nodes));
                rep["levels"] = Json(std::move(lv));
                rep["generators"] = Json(static_cast<long long>(fn.provenance.size()));
                emit(lyap_report, Json(std::move(rep)).dump() + "\n");
            }
        } else if (cmd_attr->parsed()) {
            LoadedModel m = resolve_model(attr_model);
            const double eps = resolve_eps(attr_eps, m);
            auto lattice = attractor_lattice(m.space, m.relation, eps, attr_cap);
            if (attr_format == "dot") {
                emit(attr_out, lattice_dot(lattice));
            } else {
                ChainStructure cs = chain_structure(m.space, m.relation, eps);
                Json arr = Json::array();
                for (const auto& rec : lattice) {
                    Json::Object o;
                    o["attractor"] = Json::index_set(rec.attractor);
                    o["repellor"] = Json::index_set(rec.repellor);
                    o["trace"] = Json::index_set(rec.trace);
                    o["repellor_trace"] = Json::index_set(rec.repellor_trace);
                    IndexSet comp_ids;
                    for (Index ci = 0; ci < cs.components.size(); ++ci)
                        if (set_subset(cs.components[ci], rec.trace)) comp_ids.push_back(ci);
                    o["trace_components"] = Json::index_set(comp_ids);
                    arr.push_back(Json(std::move(o)));
                }
                // immediate covers of the trace-inclusion order
                Json hasse = Json::array();
                for (Index i = 0; i < lattice.size(); ++i)
                    for (Index j = 0; j < lattice.size(); ++j) {
                        if (i == j || lattice[i].trace == lattice[j].trace ||
                            !set_subset(lattice[i].trace, lattice[j].trace))
                            continue;
                        bool immediate = true;
                        for (Index k = 0; k < lattice.size() && immediate; ++k) {
                            if (k == i || k == j) continue;
                            if (set_subset(lattice[i].trace, lattice[k].trace) &&
                                set_subset(lattice[k].trace, lattice[j].trace) &&
                                lattice[k].trace != lattice[i].trace &&
                                lattice[k].trace != lattice[j].trace)
                                immediate = false;
                        }
                        if (immediate) {
                            Json::Array e;
                            e.emplace_back(i);
                            e.emplace_back(j);
                            hasse.push_back(Json(std::move(e)));
                        }
                    }
                Json::Object top;
                top["eps"] = Json(eps);
                top["lattice"] = std::move(arr);
                top["hasse_edges"] = std::move(hasse);
                emit(attr_out, Json(std::move(top)).dump() + "\n");
            }
        } else if (cmd_mix->parsed()) {
            LoadedModel m = resolve_model(mix_model);
            const double eps = resolve_eps(mix_eps, m);
            MixingResult res = is_chain_mixing(m.space, m.relation, eps);
            Json::Object o;
            o["eps"] = Json(eps);
            o["transitive"] = Json(res.transitive);
            o["mixing"] = Json(res.mixing);
            o["chain_convention"] =
                Json("step chains may open with an eps-jump from the source; anchored chains "
                     "coincide at eps = 0 for maps");
            if (res.transitive) {
                ChainStructure cs = chain_structure(m.space, m.relation, eps);
                Json comps = Json::array();
                for (Index c = 0; c < cs.components.size(); ++c) {
                    CyclicFactor fac = cyclic_factor(cs, c, cs.components[c].front());
                    Json::Object cj;
                    cj["period"] = Json(static_cast<long long>(fac.k));
                    cj["base"] = Json(fac.base);
                    Json residues = Json::array();
                    for (const auto& [p, r] : fac.classes) {
                        Json::Array pr;
                        pr.emplace_back(p);
                        pr.emplace_back(r);
                        residues.push_back(Json(std::move(pr)));
                    }
                    cj["residues"] = std::move(residues);
                    cj["n_bound"] = Json(static_cast<long long>(mixing_length_bound(cs, c)));
                    comps.push_back(Json(std::move(cj)));
                }
                o["components"] = std::move(comps);
                if (res.witness && !mix_witness.empty()) {
                    std::ostringstream ws;
                    ws << "point,residue\n";
                    for (const auto& [p, r] : res.witness->classes)
                        ws << m.space.label(p) << ',' << r << '\n';
                    emit(mix_witness, ws.str());
                }
            }
            emit(mix_out, Json(std::move(o)).dump() + "\n");
        } else if (cmd_mane->parsed()) {
            LoadedModel m = resolve_model(mane_model);
            const double eps = resolve_eps(mane_eps, m);
            const double r = mane_res == "auto" ? m.resolution : resolve_eps(mane_res, m);
            ManeReport rep = mane_set(m.space, m.relation, r, eps, mane_period);
            Json::Object o;
            o["method"] = Json(rep.method);
            o["r"] = Json(rep.r);
            o["eps"] = Json(rep.eps);
            o["fixed_set"] = Json::index_set(rep.fixed_set);
            o["interior_fixed"] = Json::index_set(rep.interior_fixed);
            o["k_set"] = Json::index_set(rep.k_set);
            o["mane_cyclic"] = Json::index_set(rep.mane_cyclic);
            if (!rep.per_sets.empty()) {
                Json::Object per;
                for (const auto& [p, set] : rep.per_sets)
                    per[std::to_string(p)] = Json::index_set(set);
                o["per_sets"] = Json(std::move(per));
            }
            emit(mane_out, Json(std::move(o)).dump() + "\n");
        } else if (cmd_disc->parsed()) {
            GridModel g = discretize(disc_map, parse_params(disc_params), disc_geom, disc_cells,
                                     disc_mode, disc_rho);
            if (!disc_times_map.empty()) {
                GridModel h = discretize(disc_times_map, parse_params(disc_times_params),
                                         disc_times_geom,
                                         disc_times_cells ? disc_times_cells : disc_cells,
                                         disc_mode, disc_rho);
                g = product_grid(g, h);
            }
            emit(disc_out, model_json(g.space, g.relation).dump() + "\n");
        } else if (cmd_models->parsed() && cmd_models_list->parsed()) {
            std::ostringstream os;
            for (const auto& entry : catalog()) os << entry.name << ": " << entry.summary << "\n";
            emit("", os.str());
        } else if (cmd_verify->parsed()) {
            LoadedModel m = resolve_model(verify_model);
            return run_verify(m, resolve_eps(verify_eps, m), threads);
        }
    } catch (const SchemaError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const MetricError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const IndexError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

namespace {

int run_verify(const LoadedModel& model, double eps, unsigned threads) {
    const SpaceModel& s = model.space;
    const Relation& f = model.relation;
    const Index n = s.size();
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    constexpr double tol = 1e-12;

    BarrierMatrix m = barrier(s, f, BarrierKind::bound, threads);
    BarrierMatrix l = barrier(s, f, BarrierKind::length, threads);

    {
        bool ok = true;
        for (Index x = 0; x < n && ok; ++x)
            for (Index y = 0; y < n && ok; ++y) {
                ok = m.values.at(x, y) <= l.values.at(x, y) + tol &&
                     m.values.at(x, y) >= 0 && m.values.at(x, y) <= s.diam() + tol &&
                     l.values.at(x, y) <= 2 * s.diam() + tol;
                if (ok && f.contains(x, y))
                    ok = m.values.at(x, y) == 0.0 && l.values.at(x, y) == 0.0;
            }
        report("barrier bounds and zero property on pairs", ok);
    }
    {
        bool ok = true;
        const Index stride = n > 40 ? n / 40 + 1 : 1;
        for (Index x = 0; x < n && ok; x += stride)
            for (Index y = 0; y < n && ok; y += stride)
                for (Index z = 0; z < n && ok; z += stride)
                    ok = m.values.at(x, y) <= m.values.at(x, z) + m.values.at(z, y) + tol &&
                         l.values.at(x, y) <= l.values.at(x, z) + l.values.at(z, y) + tol;
        report("directed triangle inequalities", ok);
    }
    {
        BarrierMatrix minv = barrier(s, inverse(f), BarrierKind::bound, threads);
        bool ok = true;
        for (Index x = 0; x < n && ok; ++x)
            for (Index y = 0; y < n && ok; ++y) ok = m.values.at(x, y) == minv.values.at(y, x);
        report("inversion symmetry", ok);
    }
    if (n <= 8 && f.size() <= 10) {
        bool ok = true;
        for (auto kind : {BarrierKind::bound, BarrierKind::length}) {
            BarrierMatrix fast = barrier(s, f, kind, threads);
            BarrierMatrix slow = brute_force_barrier(s, f, kind);
            for (Index x = 0; x < n && ok; ++x)
                for (Index y = 0; y < n && ok; ++y)
                    ok = std::abs(fast.values.at(x, y) - slow.values.at(x, y)) <= tol;
        }
        report("oracle equivalence", ok);
    }
    {
        ChainStructure cs = chain_structure(s, f, eps);
        bool ok = true;
        for (Index x = 0; x < n && ok; ++x)
            for (Index y = 0; y < n && ok; ++y) {
                if (m.values.at(x, y) <= eps) ok = cs.reach.contains(x, y);
                if (ok && cs.reach.contains(x, y)) ok = m.values.at(x, y) <= 2 * eps + tol;
            }
        report("sublevel sandwich at eps", ok);
    }
    {
        bool ok = true;
        try {
            ChainStructure cs = chain_structure(s, f, 0.0);
            if (!cs.recurrent.empty()) {
                QuotientSpace q = quotient(s, cs);
                for (Index a = 0; a < q.classes.size() && ok; ++a)
                    for (Index b = 0; b < q.classes.size() && ok; ++b)
                        for (Index c = 0; c < q.classes.size() && ok; ++c)
                            ok = q.qdist.at(a, b) <=
                                 std::max(q.qdist.at(a, c), q.qdist.at(c, b));
            }
        } catch (const Error&) {
            ok = false;
        }
        report("quotient ultrametric", ok);
    }
    {
        bool ok = true;
        try {
            ChainStructure cs = chain_structure(s, f, 0.0);
            if (cs.components.size() <= 10)
                conley_identities(s, f, attractor_lattice(s, f));
        } catch (const Error&) {
            ok = false;
        }
        report("attractor lattice identities", ok);
    }
    if (n <= 40) {
        bool ok = true;
        try {
            complete_lyapunov(s, f, ChainKind::conley); // self-verifying
        } catch (const Error&) {
            ok = false;
        }
        report("complete Lyapunov contract", ok);
    }
    {
        bool ok = inverse(inverse(f)) == f;
        IndexSet d = domain(f);
        ok = ok && restrict(restrict(f, d), d) == restrict(f, d);
        report("relation algebra sanity", ok);
    }
    return failures == 0 ? 0 : 2;
}

} // namespace
