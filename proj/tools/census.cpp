#include "abvar/census.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace abvar {

namespace {

namespace fs = std::filesystem;

std::vector<std::vector<Int>> coefficient_range(int g, const std::vector<long>& bounds) {
    std::vector<std::vector<Int>> out;
    std::vector<long> b(g);
    for (int i = 0; i < g; ++i) b[i] = bounds.empty() ? 0 : bounds[std::min<std::size_t>(i, bounds.size() - 1)];
    std::vector<long> cur(g);
    for (int i = 0; i < g; ++i) cur[i] = -b[i];
    while (true) {
        out.push_back(std::vector<Int>(cur.begin(), cur.end()));
        int i = g - 1;
        while (i >= 0 && cur[i] == b[i]) cur[i] = -b[i], --i;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

std::optional<Json> read_cached(const fs::path& path, const std::string& hash) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        Json doc = Json::parse(in);
        if (doc.at("metadata").at("config_hash") == hash) return doc;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

void write_atomic(const fs::path& path, const std::string& text) {
    std::ostringstream tag;
    tag << ".tmp." << std::this_thread::get_id();
    fs::path tmp = path;
    tmp += tag.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) fail(ErrorKind::Internal, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

Json compute(const WeilInput& w, const ReportConfig& cfg, const std::string& hash) {
    Json doc;
    try {
        doc = ppav_document(w, cfg);
    } catch (const Error& e) {
        doc = error_document("ppav", &w, e);
    } catch (const std::exception& e) {
        doc = error_document("ppav", &w, Error(ErrorKind::Internal, e.what()));
    }
    if (!doc.contains("metadata")) doc["metadata"] = Json{{"config_hash", hash}};
    return doc;
}

}  // namespace

Json run_census(const CensusConfig& cfg) {
    if (!is_prime(cfg.q)) fail(ErrorKind::NonPrimeField, "census needs a prime field size");
    std::map<std::string, long> rejected;
    std::vector<WeilInput> inputs;
    long candidates = 0;
    for (const auto& a : coefficient_range(cfg.g, cfg.bounds)) {
        ++candidates;
        WeilInput w;
        w.g = cfg.g;
        w.q = cfg.q;
        w.a = a;
        w.h = weil_from_coefficients(cfg.g, cfg.q, a);
        try {
            validate_weil(w.h, w.q);
            inputs.push_back(std::move(w));
        } catch (const Error& e) {
            ++rejected[error_kind_name(e.kind())];
        }
    }

    std::string hash = config_hash(config_string(cfg.report));
    if (!cfg.cache_dir.empty()) fs::create_directories(cfg.cache_dir);
    std::vector<Json> docs(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < inputs.size();) {
            const auto& w = inputs[i];
            std::string label = format_label(w.g, w.q, w.a);
            if (cfg.cache_dir.empty()) {
                docs[i] = compute(w, cfg.report, hash);
                continue;
            }
            fs::path path = fs::path(cfg.cache_dir) / (label + ".json");
            if (auto cached = read_cached(path, hash)) {
                docs[i] = std::move(*cached);
                continue;
            }
            docs[i] = compute(w, cfg.report, hash);
            write_atomic(path, docs[i].dump(2) + "\n");
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(1, cfg.jobs); ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::map<std::string, long> errors, outcomes;
    long violations = 0;
    Json results = Json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& doc = docs[i];
        Json r;
        r["label"] = format_label(inputs[i].g, inputs[i].q, inputs[i].a);
        if (doc.contains("error")) {
            r["status"] = "error";
            r["error"] = doc.at("error").at("kind");
            ++errors[doc.at("error").at("kind").get<std::string>()];
        } else {
            r["status"] = "ok";
            r["p_rank"] = doc.at("p_rank");
            r["overorders"] = doc.at("overorders");
            r["ppav_total"] = doc.at("ppav_total");
            for (const auto& o : doc.at("orders")) ++outcomes[o.at("outcome").get<std::string>()];
        }
        auto bad = check_report_invariants(doc);
        violations += long(bad.size());
        r["violations"] = bad;
        results.push_back(r);
    }
    Json summary;
    summary["g"] = cfg.g;
    summary["q"] = cfg.q.get_si();
    summary["bounds"] = cfg.bounds;
    summary["candidates"] = candidates;
    summary["rejected"] = rejected;
    summary["labels"] = inputs.size();
    summary["errors"] = errors;
    summary["order_outcomes"] = outcomes;
    summary["invariant_violations"] = violations;
    summary["config_hash"] = hash;
    summary["results"] = results;
    return summary;
}

}  // namespace abvar
