#include <coam/report.hpp>
#include <coam/svg.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace coam;

namespace {

LaurentPolynomial load_input(const std::string& arg) {
    std::string text = arg;
    {
        std::ifstream f(arg);
        if (f) text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i == std::string::npos) throw parse_error("empty input", 0);
    if (text[i] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("bad JSON input: ") + e.what(), 0);
        }
        try {
            int n = j.at("n").get<int>();
            std::vector<Term> ts;
            for (const auto& t : j.at("terms")) {
                Term tm;
                tm.exp = t.at("exp").get<std::vector<long long>>();
                tm.coeff = Cplx(t.value("re", 0.0), t.value("im", 0.0));
                ts.push_back(std::move(tm));
            }
            return make_polynomial(n, ts);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("bad polynomial JSON: ") + e.what(), 0);
        }
    }
    return parse_polynomial(text);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot open output file: " + path);
    f << text;
}

jsonw::Value partial_error(const std::string& what) {
    auto v = jsonw::Value::object();
    v.set("schema", "coam-report/1");
    v.set("error", what);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tropical spine, coamoeba shell and samplers for Laurent polynomials"};
    app.require_subcommand(1);

    std::string input, outPath, svgPath, pgmPath;
    AnalyzeOptions ao;
    int domains = 2;
    int tSteps = 8;
    double uValue = 0;
    std::vector<double> point;
    int phases = 16;
    std::vector<double> epsilons;
    bool noSample = false, noDiag = false;

    auto addCommon = [&](CLI::App* c, bool withInput = true) {
        if (withInput) c->add_option("input", input, "polynomial text, file, or JSON file")->required();
        c->add_option("--grid", ao.grid, "raster resolution per axis");
        c->add_option("--samples", ao.samples, "coamoeba sample fibers");
        c->add_option("--seed", ao.seed, "master RNG seed");
        c->add_option("--phi-samples", ao.phiSamples, "Monte Carlo samples per Phi estimate");
        c->add_option("--phases", phases, "phase grid for index typing");
        c->add_option("--epsilons", epsilons, "perturbation sizes for index typing");
        c->add_option("--out", outPath, "write the JSON report here (default stdout)");
    };

    auto* A = app.add_subcommand("analyze", "full pipeline: orders, Phi, spine, shell, coamoeba");
    addCommon(A);
    A->add_option("--svg", svgPath, "also render an SVG here");
    A->add_option("--pgm", pgmPath, "also dump the raster as PGM here");
    A->add_option("--domains", domains, "fundamental domains per axis in the SVG");
    A->add_flag("--no-sample", noSample, "skip coamoeba sampling");
    A->add_flag("--no-diagnostics", noDiag, "skip weight-two diagnostics");

    auto* S = app.add_subcommand("shell", "spine-dual shell arrangement only");
    addCommon(S);

    auto* C = app.add_subcommand("coamoeba", "sampled coamoeba statistics only");
    addCommon(C);
    C->add_option("--pgm", pgmPath, "dump the raster as PGM here");

    auto* Am = app.add_subcommand("amoeba", "order map report; optionally test a point");
    addCommon(Am);
    Am->add_option("--point", point, "log-modulus point to classify")->expected(-1);

    auto* D = app.add_subcommand("deform", "coefficient family f_t along the spine lift");
    addCommon(D);
    D->add_option("--t-steps", tSteps, "number of t values, log-spaced in (0.02, 1/e]");
    D->add_option("--u", uValue, "also evaluate the interpolating family at this u");

    auto* R = app.add_subcommand("render", "SVG figure (torus tiles + spine panel)");
    addCommon(R);
    R->add_option("--domains", domains, "fundamental domains per axis");
    R->add_flag("--no-sample", noSample, "shell-only figure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    ao.classify.phases = phases;
    if (!epsilons.empty()) ao.classify.epsilons = epsilons;
    ao.classify.seed = ao.seed;
    ao.sampleCoamoeba = !noSample;
    ao.runDiagnostics = !noDiag;

    LaurentPolynomial p;
    try {
        p = load_input(input);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (S->parsed()) {
            ao.sampleCoamoeba = false;
            ao.runDiagnostics = false;
        }
        if (Am->parsed()) {
            ao.sampleCoamoeba = false;
            ao.runDiagnostics = false;
        }
        if (D->parsed()) {
            ao.sampleCoamoeba = false;
            ao.runDiagnostics = false;
        }
        if (C->parsed()) ao.runDiagnostics = false;
        if (R->parsed()) ao.runDiagnostics = false;

        AnalysisReport rep = analyze(p, ao);
        auto full = to_json(rep);

        if (A->parsed()) {
            if (!svgPath.empty()) emit(render_svg(rep, domains), svgPath);
            if (!pgmPath.empty() && rep.coamoeba.sampled) write_pgm(rep.raster, pgmPath);
            emit(full.dump(), outPath);
            return rep.boundsPass ? 0 : 1;
        }
        if (S->parsed()) {
            auto v = jsonw::Value::object();
            v.set("schema", "coam-shell/1");
            v.set("hash", rep.hashHex);
            v.set("shell", detail::shell_json(rep.shell));
            emit(v.dump(), outPath);
            return 0;
        }
        if (C->parsed()) {
            if (!pgmPath.empty() && rep.coamoeba.sampled) write_pgm(rep.raster, pgmPath);
            emit(full.dump(), outPath);
            return rep.boundsPass ? 0 : 1;
        }
        if (Am->parsed()) {
            auto& v = full;
            if (!point.empty()) {
                if ((int)point.size() != p.n) throw error("--point arity mismatch");
                auto mr = amoeba_membership(p, point, 1e-6);
                auto o = jsonw::Value::object();
                o.set("point", detail::vecd_json(point));
                o.set("verdict", mr.verdict == Membership::inside
                                     ? "inside"
                                     : mr.verdict == Membership::outside ? "outside"
                                                                         : "boundary-uncertain");
                if (mr.order) o.set("order", detail::exp_json(*mr.order));
                v.set("membership", std::move(o));
            }
            emit(v.dump(), outPath);
            return 0;
        }
        if (D->parsed()) {
            auto v = jsonw::Value::object();
            v.set("schema", "coam-deform/1");
            v.set("hash", rep.hashHex);
            auto arr = jsonw::Value::array();
            double tHi = std::exp(-1.0), tLo = 0.02;
            for (int s = 0; s < tSteps; ++s) {
                double t = tSteps == 1 ? tHi
                                       : std::exp(std::log(tHi) +
                                                  (std::log(tLo) - std::log(tHi)) * s /
                                                      (double)(tSteps - 1));
                auto ft = deformation_family(p, rep.nu, t);
                auto o = jsonw::Value::object();
                o.set("t", t);
                auto ts = jsonw::Value::array();
                for (const auto& tm : ft.terms) {
                    auto w = jsonw::Value::object();
                    w.set("exp", detail::exp_json(tm.exp));
                    w.set("re", tm.coeff.real());
                    w.set("im", tm.coeff.imag());
                    ts.push(std::move(w));
                }
                o.set("terms", std::move(ts));
                arr.push(std::move(o));
            }
            v.set("family", std::move(arr));
            if (uValue > 0) {
                auto fu = tilde_family(p, rep.nu, uValue);
                auto o = jsonw::Value::object();
                o.set("u", uValue);
                auto ts = jsonw::Value::array();
                for (const auto& tm : fu.terms) {
                    auto w = jsonw::Value::object();
                    w.set("exp", detail::exp_json(tm.exp));
                    w.set("re", tm.coeff.real());
                    w.set("im", tm.coeff.imag());
                    ts.push(std::move(w));
                }
                o.set("terms", std::move(ts));
                v.set("tilde", std::move(o));
            }
            emit(v.dump(), outPath);
            return 0;
        }
        if (R->parsed()) {
            emit(render_svg(rep, domains), outPath.empty() ? svgPath : outPath);
            return 0;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        emit(partial_error(e.what()).dump(), outPath);
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
