#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ditalg/io.hpp"

using namespace ditalg;

namespace {

enum Exit { ok = 0, parse_error = 2, cert_failure = 3, obstruction = 4 };

std::uint64_t default_seed() {
    if (const char* s = std::getenv("DITALG_SEED")) return std::stoull(s);
    return 1;
}

void print_cert(const char* name, const Certificate& c) {
    std::cout << "  " << std::left << std::setw(18) << name << (c.ok ? "PASS" : "FAIL");
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
}

bool print_certificates(const Dit& d) {
    Certificates c = certify(d);
    print_cert("directed", c.directed);
    print_cert("triangular layer", c.triangular_layer);
    print_cert("triangular ideal", c.triangular_ideal);
    print_cert("balanced", c.balanced);
    print_cert("interlaced", c.interlaced);
    print_cert("Roiter", {c.roiter(), ""});
    return c.directed.ok && c.balanced.ok && c.roiter();
}

bool require_directed(const Dit& d) {
    Certificate c = check_directed_cert(d);
    if (!c.ok) std::cerr << "error: the bigraph must be directed: " << c.detail << "\n";
    return c.ok;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

int cmd_check(const std::string& path) {
    Presentation p = load_presentation(path);
    std::cout << path << ": " << p.dit->npoints() << " points, " << p.dit->narrows() << " arrows over "
              << p.dit->field().name() << "\n";
    bool good = print_certificates(*p.dit);
    if (p.layer_filtration) {
        Certificate c = check_layer_filtration(*p.dit, *p.layer_filtration);
        print_cert("layer filtration", c);
        good = good && c.ok;
    }
    return good ? ok : cert_failure;
}

int cmd_hom(const std::string& path, const std::string& ms, const std::string& ns) {
    Presentation p = load_presentation(path);
    const Dit& d = *p.dit;
    Rep m = module_from_spec(d, ms), n = module_from_spec(d, ns);
    auto basis = hom(d, m, n);
    std::cout << "dim hom(" << ms << ", " << ns << ") = " << basis.size() << "\n";
    for (std::size_t k = 0; k < basis.size(); ++k) {
        std::cout << "basis " << k << ":\n";
        for (int pt = 0; pt < d.npoints(); ++pt) {
            const Matrix& f = basis[k].f0[static_cast<std::size_t>(pt)];
            if (f.rows() && f.cols()) std::cout << "  f0[" << d.layer.point(pt).name << "] = " << f.to_string() << "\n";
        }
        for (int a = 0; a < d.narrows(); ++a) {
            if (!d.layer.dashed(a)) continue;
            const Matrix& f = basis[k].f1[static_cast<std::size_t>(a)];
            if (f.rows() && f.cols()) std::cout << "  f1[" << d.layer.arrow(a).name << "] = " << f.to_string() << "\n";
        }
    }
    return ok;
}

void print_steps(const std::shared_ptr<const Dit>& src, const std::vector<Step>& steps) {
    auto cur = src;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        ReductionPtr r = make_reduction(cur, steps[i]);
        cur = r->target_ptr();
        Certificates c = certify(*cur);
        std::cout << "step " << i + 1 << ": " << steps[i].describe() << "\n    -> " << cur->npoints() << " points, "
                  << cur->narrows() << " arrows, c = " << r->dim_factor() << ", interlaced "
                  << (c.interlaced.ok ? "PASS" : "FAIL") << ", Roiter " << (c.roiter() ? "PASS" : "FAIL") << "\n";
    }
}

int cmd_reduce(const std::string& path, std::size_t d, int budget, const std::string& plan, const std::string& out) {
    Presentation p = load_presentation(path);
    if (!require_directed(*p.dit)) return cert_failure;
    std::shared_ptr<const Dit> target;
    std::vector<Step> steps;
    std::optional<Obstruction> stuck;
    if (!plan.empty()) {
        Json j = read_json(plan);
        if (!j.is_array()) throw ParseError(plan + ": expected a list of steps");
        for (const auto& s : j) steps.push_back(step_from_json(p.dit->field(), s));
        print_steps(p.dit, steps);
        target = replay(p.dit, steps)->target_ptr();
    } else {
        ReduceOutcome r = reduce_to_minimal(p.dit, d, budget);
        for (const auto& line : r.plan.log) std::cout << "  " << line << "\n";
        print_steps(p.dit, r.plan.steps);
        target = r.minimal;
        stuck = r.obstruction;
    }
    if (stuck) {
        std::cout << "OBSTRUCTION: " << stuck->reason << "\n" << stuck->presentation << "\n";
    } else {
        std::cout << "target:\n";
        print_certificates(*target);
    }
    if (!out.empty() && target) write_file(out, emit_dit(*target));
    return stuck ? obstruction : ok;
}

int cmd_classify(const std::string& path, std::size_t d, int budget, const std::vector<std::string>& lambda_text,
                 const std::string& out, std::uint64_t seed) {
    Presentation p = load_presentation(path);
    if (!require_directed(*p.dit)) return cert_failure;
    std::optional<std::vector<Scalar>> lambdas;
    if (!lambda_text.empty()) {
        lambdas.emplace();
        for (const auto& t : lambda_text) lambdas->push_back(p.dit->field().parse(t));
    }
    ClassificationReport rep = classify(p.dit, d, budget, lambdas, seed);
    const Dit& src = *p.dit;
    if (rep.reduction.obstruction) {
        for (const auto& line : rep.reduction.plan.log) std::cout << "  " << line << "\n";
        std::cout << "OBSTRUCTION: " << rep.reduction.obstruction->reason << "\n"
                  << rep.reduction.obstruction->presentation << "\n";
    } else {
        std::cout << "plan: " << rep.reduction.plan.steps.size() << " steps\n";
        std::cout << "indecomposables of dim <= " << d << ": " << rep.indecomposables.size() << "\n";
        for (const auto& m : rep.indecomposables) {
            std::cout << "  " << m.origin << "  dims";
            for (int pt = 0; pt < src.npoints(); ++pt)
                std::cout << " " << src.layer.point(pt).name << ":" << m.module.dims[static_cast<std::size_t>(pt)];
            std::cout << "\n";
        }
        for (const auto& f : rep.families) {
            std::cout << "family at " << f.point << " (weight " << f.weight << "), λ sample";
            for (const auto& l : f.lambdas) std::cout << " " << l.to_string();
            std::cout << ", specializations " << (f.specializations_ok ? "PASS" : "FAIL") << "\n";
        }
        if (!rep.dedup.empty()) std::cout << "merged duplicates: " << rep.dedup.size() << "\n";
        if (!rep.exceptions.empty()) std::cout << "exceptions: " << rep.exceptions << "\n";
    }
    if (!out.empty()) write_file(out, pretty_json(report_to_json(make_report_file(src, rep))));
    return rep.ok() ? ok : obstruction;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduction and classification for interlaced weak ditalgebras"};
    app.require_subcommand(1);

    std::string path, mspec, nspec, plan, out;
    std::size_t d = 0;
    int budget = 100;
    std::vector<std::string> lambdas;
    std::uint64_t seed = default_seed();

    auto* check = app.add_subcommand("check", "Print the structural certificates of a presentation");
    check->add_option("file", path, "presentation file")->required();

    auto* homc = app.add_subcommand("hom", "Dimension and basis of a hom space");
    homc->add_option("file", path, "presentation file")->required();
    homc->add_option("M", mspec, "module: S:p, S:p@λ, J:p@λ^t or a module file")->required();
    homc->add_option("N", nspec, "module: S:p, S:p@λ, J:p@λ^t or a module file")->required();

    auto* red = app.add_subcommand("reduce", "Run a reduction plan");
    red->add_option("file", path, "presentation file")->required();
    auto* autoopt = red->add_option("--auto", d, "reduce to minimal for modules of dim <= D");
    red->add_option("--plan", plan, "JSON list of steps")->excludes(autoopt);
    red->add_option("--budget", budget, "step budget");
    red->add_option("-o,--output", out, "write the target presentation here");

    auto* cls = app.add_subcommand("classify", "Classify indecomposables of bounded dimension");
    cls->add_option("file", path, "presentation file")->required();
    cls->add_option("d", d, "dimension bound")->required();
    cls->add_option("--budget", budget, "step budget");
    cls->add_option("--lambda-sample", lambdas, "λ values for the families")->delimiter(',');
    cls->add_option("-o,--output", out, "write the JSON report here");
    cls->add_option("--seed", seed, "seed for randomized idempotent search");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check(path);
        if (*homc) return cmd_hom(path, mspec, nspec);
        if (*red) {
            if (plan.empty() && !*autoopt) throw CLI::RequiredError("--auto or --plan");
            return cmd_reduce(path, d, budget, plan, out);
        }
        if (*cls) return cmd_classify(path, d, budget, lambdas, out, seed);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_error;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return ok;
}
