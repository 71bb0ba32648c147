#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "abvar/census.hpp"

using namespace abvar;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

int emit(const Json& doc) {
    std::cout << doc.dump(2) << "\n";
    return doc.contains("error") ? 2 : 0;
}

// Runs a document builder, turning library errors into error documents.
template <class F>
int run_doc(const std::string& command, const std::string& arg, F build, bool markdown = false) {
    std::optional<WeilInput> w;
    try {
        w = parse_input(arg);
        Json doc = build(*w);
        if (markdown && !doc.contains("error")) {
            std::cout << ppav_markdown(doc);
            return 0;
        }
        return emit(doc);
    } catch (const Error& e) {
        return emit(error_document(command, w ? &*w : nullptr, e));
    }
}

std::vector<long> parse_bounds(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
    if (out.empty()) throw CLI::ValidationError("--range", "needs comma separated bounds");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principal polarizations in isogeny classes of abelian varieties over prime fields"};
    app.require_subcommand(1);

    ReportConfig cfg;
    cfg.fixtures = env_or("ABVAR_FIXTURES", "");
    std::string max_index = "1048576";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision", cfg.pipeline.precision, "p-adic precision of the local factors")
            ->check(CLI::Range(4, 100000));
        sub->add_option("--max-index", max_index, "largest [O_L : R_w] to enumerate");
        sub->add_option("--max-splitting-degree", cfg.pipeline.max_splitting_degree,
                        "largest splitting field degree for the RRC");
    };

    std::string input;
    auto* info = app.add_subcommand("info", "validation, p-rank, [O_L : R_w] and overorders");
    info->add_option("input", input, "label g.q.c1_..._cg, polynomial line or file")->required();
    add_common(info);

    auto* rrc = app.add_subcommand("rrc", "Shimura-Taniyama and residue flags per CM-type");
    rrc->add_option("input", input, "label, polynomial line or file")->required();
    add_common(rrc);

    bool json = false, markdown = false;
    auto* ppav = app.add_subcommand("ppav", "principal polarizations for every overorder of R_w");
    ppav->add_option("input", input, "label, polynomial line or file")->required();
    ppav->add_flag("--json", json, "JSON report");
    ppav->add_flag("--markdown", markdown, "markdown table (default)");
    ppav->add_option("--fixtures", cfg.fixtures, "unit fixture file (verified before use)");
    add_common(ppav);

    CensusConfig cc;
    std::string range = "3";
    cc.cache_dir = env_or("ABVAR_CACHE_DIR", "");
    long q = 3;
    auto* census = app.add_subcommand("census", "run ppav over a coefficient range");
    census->add_option("--g", cc.g, "dimension")->required()->check(CLI::Range(1, 4));
    census->add_option("--q", q, "prime field size")->required();
    census->add_option("--range", range, "bounds |a_1|,|a_2|,... (the last one repeats)");
    census->add_option("--jobs", cc.jobs, "worker threads")->check(CLI::Range(1, 256));
    census->add_option("--cache", cc.cache_dir, "directory of per-label documents");
    add_common(census);

    auto* label = app.add_subcommand("label", "label codec");
    label->require_subcommand(1);
    std::string text;
    auto* enc = label->add_subcommand("encode", "polynomial line or file to label");
    enc->add_option("polynomial", text, "\"c_0 c_1 ... c_2g p=<prime>\" or a file")->required();
    auto* dec = label->add_subcommand("decode", "label to polynomial line");
    dec->add_option("label", text)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.pipeline.max_index = Int(max_index);
    } catch (const std::exception&) {
        std::cerr << "--max-index: not an integer\n";
        return 2;
    }

    if (*info) return run_doc("info", input, [&](const WeilInput& w) { return info_document(w, cfg); });
    if (*rrc) return run_doc("rrc", input, [&](const WeilInput& w) { return rrc_document(w, cfg); });
    if (*ppav)
        return run_doc(
            "ppav", input, [&](const WeilInput& w) { return ppav_document(w, cfg); }, !json || markdown);
    if (*census) {
        try {
            cc.q = q;
            cc.bounds = parse_bounds(range);
            cc.report = cfg;
            Json s = run_census(cc);
            std::cout << s.dump(2) << "\n";
            return s.at("invariant_violations").get<long>() == 0 ? 0 : 1;
        } catch (const Error& e) {
            return emit(error_document("census", nullptr, e));
        }
    }
    try {
        if (*enc) {
            WeilInput w = parse_input(text);
            std::cout << format_label(w.h, w.q) << "\n";
        } else {
            WeilInput w = parse_label(text);
            std::cout << format_poly_line(w.h, w.q) << "\n" << w.h.str() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
