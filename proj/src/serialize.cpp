#include "bgw/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bgw {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Json to_json(const DyadicCoefficients& coeffs) {
    Json j;
    j["k"] = coeffs.k;
    Json arr = Json::array();
    for (const Rational& r : coeffs.a)
        arr.push_back({{"num", numerator(r).str()}, {"den", denominator(r).str()}});
    j["a"] = arr;
    j["a_combined"] = {{"num", numerator(coeffs.a_combined).str()},
                       {"den", denominator(coeffs.a_combined).str()}};
    j["a_combined_str"] = to_string(coeffs.a_combined);
    return j;
}

namespace {

const char* kind_name(SeminormKind kind) {
    switch (kind) {
        case SeminormKind::Bmo: return "bmo";
        case SeminormKind::Holder: return "holder";
        case SeminormKind::Sobolev: return "sobolev";
        case SeminormKind::WeightedSup: return "weighted_sup";
    }
    return "?";
}

}  // namespace

Json to_json(const SeminormReport& report) {
    Json j;
    j["kind"] = kind_name(report.kind);
    j["value"] = report.value;
    j["bias"] = report.bias == EstimatorBias::LowerBound ? "lower_bound" : "quadrature_approx";
    j["meta"] = report.meta;
    return j;
}

Json to_json(const ChainStep& step) {
    Json j;
    j["name"] = step.name;
    j["value"] = step.value;
    j["bound"] = step.bound;
    j["slack"] = step.slack;
    j["holds"] = step.holds;
    j["checked"] = step.checked;
    if (step.implied_constant != 0.0) j["implied_constant"] = step.implied_constant;
    return j;
}

Json to_json(const InequalityReport& report) {
    Json j;
    j["theorem"] = report.theorem == TheoremKind::BgwBmo ? "bgw_bmo" : "bgw_sobolev";
    j["dim"] = report.dim;
    j["eta"] = report.eta;
    j["alpha"] = report.alpha;
    if (report.theorem == TheoremKind::BgwSobolev) {
        j["s"] = report.s;
        j["p"] = report.p;
    }
    j["lhs_sup"] = report.lhs;
    j["core_norm"] = report.core_norm;
    j["k_alpha"] = report.k_alpha;
    j["holder"] = report.holder;
    j["log_arg"] = report.log_arg;
    j["exponent"] = report.exponent;
    j["m0"] = report.m0;
    j["ratio"] = report.ratio;
    j["ratio_log2"] = report.ratio_log2;
    j["support_radius"] = report.support_radius;
    j["log_arg_compact"] = report.log_arg_compact;
    j["ratio_compact"] = report.ratio_compact;
    j["chain_all_hold"] = report.chain_all_hold;
    Json chain = Json::array();
    for (const ChainStep& st : report.chain) chain.push_back(to_json(st));
    j["chain"] = chain;
    j["meta"] = report.meta;
    return j;
}

Json to_json(const SweepRow& row) {
    Json j;
    j["delta"] = row.delta;
    j["linf"] = row.linf;
    j["bmo"] = row.bmo;
    j["sobolev"] = row.sobolev;
    j["k_alpha"] = row.k_alpha;
    j["holder"] = row.holder;
    j["m0"] = row.m0;
    j["ratio1"] = row.ratio1;
    j["ratio_gamma"] = row.ratio_gamma;
    j["ratio1_sobolev"] = row.ratio1_sobolev;
    j["ratio_gamma_sobolev"] = row.ratio_gamma_sobolev;
    return j;
}

Json to_json(const SharpnessSweep& sweep) {
    Json j;
    j["params"] = {{"deltas", sweep.params.deltas},
                   {"dim", sweep.params.grid.dim},
                   {"L", sweep.params.grid.L},
                   {"h", sweep.params.grid.h},
                   {"s", sweep.params.s},
                   {"p", sweep.params.p},
                   {"eta", sweep.params.eta},
                   {"alpha", sweep.params.alpha},
                   {"gamma_test", sweep.params.gamma_test}};
    Json rows = Json::array();
    for (const SweepRow& r : sweep.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    Json asserts = Json::array();
    for (const SweepAssertion& a : sweep.assertions)
        asserts.push_back({{"name", a.name}, {"value", a.value}, {"requirement", a.requirement},
                           {"pass", a.pass}});
    j["assertions"] = asserts;
    j["all_pass"] = sweep.all_pass;
    return j;
}

Json to_json(const Lemma22Estimate& estimate) {
    Json j;
    j["value"] = estimate.value;
    j["value_abs"] = estimate.value_abs;
    j["skipped"] = estimate.skipped;
    Json rows = Json::array();
    for (const Lemma22Row& r : estimate.rows)
        rows.push_back({{"trial", r.trial},
                        {"l", r.l},
                        {"numerator", r.numerator},
                        {"denom_pair", r.denom_pair},
                        {"denom_abs", r.denom_abs},
                        {"ratio_pair", r.ratio_pair},
                        {"ratio_abs", r.ratio_abs},
                        {"skipped", r.skipped}});
    j["rows"] = rows;
    return j;
}

std::string sweep_to_csv(const SharpnessSweep& sweep) {
    std::ostringstream out;
    out << "delta,linf,bmo,sobolev,k_alpha,holder,m0,ratio1,ratio_gamma,ratio1_sobolev,ratio_gamma_sobolev\n";
    for (const SweepRow& r : sweep.rows) {
        out << format_double(r.delta) << ',' << format_double(r.linf) << ',' << format_double(r.bmo)
            << ',' << format_double(r.sobolev) << ',' << format_double(r.k_alpha) << ','
            << format_double(r.holder) << ',' << r.m0 << ',' << format_double(r.ratio1) << ','
            << format_double(r.ratio_gamma) << ',' << format_double(r.ratio1_sobolev) << ','
            << format_double(r.ratio_gamma_sobolev) << '\n';
    }
    return out.str();
}

void save_grid_field_json(const GridField& f, const std::string& path) {
    f.validate();
    Json j;
    j["n"] = f.spec.dim;
    j["L"] = f.spec.L;
    j["h"] = f.spec.h;
    j["values"] = f.values;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << '\n';
}

GridField load_grid_field_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    Json j;
    in >> j;
    GridField f;
    f.spec = GridSpec{j.at("n").get<int>(), j.at("L").get<double>(), j.at("h").get<double>()};
    f.values = j.at("values").get<std::vector<double>>();
    f.validate();
    return f;
}

void save_grid_field_csv(const GridField& f, const std::string& path) {
    f.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "n,L,h\n"
        << f.spec.dim << ',' << format_double(f.spec.L) << ',' << format_double(f.spec.h) << '\n';
    const int nodes = f.spec.nodes_per_axis();
    if (f.spec.dim == 1) {
        out << "ix,value\n";
        for (int ix = 0; ix < nodes; ++ix) out << ix << ',' << format_double(f.values[ix]) << '\n';
    } else {
        out << "ix,iy,value\n";
        for (int iy = 0; iy < nodes; ++iy)
            for (int ix = 0; ix < nodes; ++ix)
                out << ix << ',' << iy << ',' << format_double(f.at(ix, iy)) << '\n';
    }
}

GridField load_grid_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "n,L,h")
        throw std::invalid_argument(path + ": expected 'n,L,h' header");
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": truncated header");
    GridField f;
    {
        std::istringstream hdr(line);
        std::string n, L, h;
        std::getline(hdr, n, ',');
        std::getline(hdr, L, ',');
        std::getline(hdr, h, ',');
        f.spec = GridSpec{std::stoi(n), std::stod(L), std::stod(h)};
    }
    if (!std::getline(in, line)) throw std::invalid_argument(path + ": missing column header");
    f.values.assign(f.spec.num_nodes(), 0.0);
    const int nodes = f.spec.nodes_per_axis();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, tok, ',');
        const int ix = std::stoi(tok);
        int iy = 0;
        if (f.spec.dim == 2) {
            std::getline(row, tok, ',');
            iy = std::stoi(tok);
        }
        std::getline(row, tok, ',');
        if (ix < 0 || ix >= nodes || iy < 0 || iy >= nodes)
            throw std::invalid_argument(path + ": sample index out of range");
        f.at(ix, iy) = std::stod(tok);
    }
    f.validate();
    return f;
}

GridField load_grid_field(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return load_grid_field_csv(path);
    return load_grid_field_json(path);
}

ExperimentConfig parse_experiment_config(const Json& j) {
    ExperimentConfig cfg;
    if (j.contains("field")) {
        const Json& f = j.at("field");
        if (f.contains("sample_file")) {
            cfg.field.sample_file = f.at("sample_file").get<std::string>();
        } else {
            cfg.field.family = f.at("family").get<std::string>();
            if (f.contains("delta")) cfg.field.delta = f.at("delta").get<double>();
            if (f.contains("eta")) cfg.field.eta = f.at("eta").get<double>();
            if (f.contains("radius")) cfg.field.radius = f.at("radius").get<double>();
            if (f.contains("sigma")) cfg.field.sigma = f.at("sigma").get<double>();
            if (f.contains("value")) cfg.field.value = f.at("value").get<double>();
            if (f.contains("coeffs")) cfg.field.coeffs = f.at("coeffs").get<std::vector<double>>();
            if (f.contains("lo")) cfg.field.lo = f.at("lo").get<std::vector<double>>();
            if (f.contains("hi")) cfg.field.hi = f.at("hi").get<std::vector<double>>();
        }
    }
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        cfg.grid = GridSpec{g.value("n", 1), g.at("L").get<double>(), g.at("h").get<double>()};
    }
    if (j.contains("params")) {
        const Json& p = j.at("params");
        cfg.eta = p.value("eta", cfg.eta);
        cfg.alpha = p.value("alpha", cfg.alpha);
        cfg.s = p.value("s", cfg.s);
        cfg.p = p.value("p", cfg.p);
    }
    cfg.mode = j.value("mode", cfg.mode);
    if (j.contains("sweep")) {
        const Json& sw = j.at("sweep");
        cfg.deltas = sw.at("deltas").get<std::vector<double>>();
        cfg.gamma_test = sw.value("gamma_test", cfg.gamma_test);
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        cfg.out_json = o.value("json", cfg.out_json);
        cfg.out_csv = o.value("csv", cfg.out_csv);
    }
    cfg.workers = j.value("workers", cfg.workers);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
    try {
        return parse_experiment_config(j);
    } catch (const Json::exception& e) {
        throw std::invalid_argument("config " + path + ": " + e.what());
    }
}

namespace {

void validate_common(const ExperimentConfig& cfg) {
    cfg.grid.validate();
    if (!(cfg.eta > 0 && cfg.eta < 1))
        throw std::invalid_argument("precondition violated: eta must lie in (0, 1)");
    if (!(cfg.alpha > 0 && cfg.alpha < cfg.grid.dim))
        throw std::invalid_argument("precondition violated: alpha must lie in (0, n)");
    if (cfg.workers < 0) throw std::invalid_argument("precondition violated: workers must be >= 0");
}

}  // namespace

void validate_for_seminorm(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (!(cfg.s > 0)) throw std::invalid_argument("precondition violated: s must be positive");
    if (!(cfg.p >= 1)) throw std::invalid_argument("precondition violated: p must be >= 1");
}

void validate_for_bgw(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.mode != "bmo" && cfg.mode != "sobolev")
        throw std::invalid_argument("precondition violated: mode must be 'bmo' or 'sobolev'");
    if (cfg.mode == "sobolev") {
        if (!(cfg.p >= 1)) throw std::invalid_argument("precondition violated: p must be >= 1");
        if (std::abs(cfg.s * cfg.p - cfg.grid.dim) > 1e-9)
            throw std::invalid_argument(
                "precondition violated: sobolev mode requires the critical relation s*p == n");
    }
}

void validate_for_sharpness(const ExperimentConfig& cfg) {
    validate_common(cfg);
    if (cfg.deltas.empty())
        throw std::invalid_argument("precondition violated: sweep.deltas must be non-empty");
    for (std::size_t i = 1; i < cfg.deltas.size(); ++i)
        if (!(cfg.deltas[i] < cfg.deltas[i - 1]))
            throw std::invalid_argument("precondition violated: sweep.deltas must decrease strictly");
    if (cfg.deltas.back() < 4.0 * cfg.grid.h)
        throw std::invalid_argument("precondition violated: smallest delta must be at least 4h");
    if (!(cfg.gamma_test > 0 && cfg.gamma_test < 1))
        throw std::invalid_argument("precondition violated: gamma_test must lie in (0, 1)");
    if (std::abs(cfg.s * cfg.p - cfg.grid.dim) > 1e-9)
        throw std::invalid_argument(
            "precondition violated: sharpness sweep requires the critical relation s*p == n");
}

AnalyticField make_analytic_field(const FieldConfig& fc, int dim) {
    AnalyticField f;
    f.dim = dim;
    if (fc.family == "log_bump") {
        f.family = LogBump{fc.delta};
    } else if (fc.family == "holder_cone") {
        f.family = HolderCone{fc.eta, fc.radius > 0 ? fc.radius : 1.0};
    } else if (fc.family == "gaussian") {
        f.family = GaussianBump{fc.sigma > 0 ? fc.sigma : 1.0};
    } else if (fc.family == "polynomial") {
        f.family = Polynomial1D{fc.coeffs};
    } else if (fc.family == "indicator") {
        if (fc.lo.size() < static_cast<std::size_t>(dim) || fc.hi.size() < static_cast<std::size_t>(dim))
            throw std::invalid_argument("indicator field: lo/hi must have n entries");
        IndicatorBox box;
        for (int d = 0; d < dim; ++d) {
            box.lo[d] = fc.lo[d];
            box.hi[d] = fc.hi[d];
        }
        f.family = box;
    } else if (fc.family == "constant") {
        const double v = fc.value;
        f.family = CustomField{"constant", [v](const Point&, int) { return v; }};
    } else {
        throw std::invalid_argument("unknown field family '" + fc.family + "'");
    }
    f.validate();
    return f;
}

GridField realize_field(const ExperimentConfig& cfg) {
    if (!cfg.field.sample_file.empty()) return load_grid_field(cfg.field.sample_file);
    return sample(make_analytic_field(cfg.field, cfg.grid.dim), cfg.grid);
}

}  // namespace bgw
