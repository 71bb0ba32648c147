#include "abvar/report.hpp"

#include <fstream>
#include <sstream>

namespace abvar {

namespace {

constexpr const char* kPinnedNote =
    "RRC verdicts per CM-type refer to a pinned complex embedding of the splitting field and a pinned prime above p";

Json jint(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

Json jrat(const Rat& r) {
    if (r.get_den() == 1) return jint(r.get_num());
    return r.get_str();
}

Json jlattice(const Lattice& l) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < l.num.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < l.num.cols(); ++j) r.push_back(jint(l.num(i, j)));
        rows.push_back(r);
    }
    return Json{{"den", jint(l.den)}, {"rows", rows}};
}

Json input_json(const WeilInput& w) {
    Json in;
    std::string label;
    try {
        label = format_label(w.h, w.q);
    } catch (const Error&) {
    }
    in["label"] = label.empty() ? Json(nullptr) : Json(label);
    in["g"] = w.g;
    in["p"] = jint(w.q);
    Json c = Json::array();
    for (long i = 0; i <= w.h.degree(); ++i) c.push_back(jrat(w.h.coeff(i)));
    in["coefficients"] = c;
    in["polynomial"] = w.h.str();
    return in;
}

Json metadata(const ReportConfig& cfg, const Json& fixtures) {
    return Json{{"precision", cfg.pipeline.precision},
                {"max_index", jint(cfg.pipeline.max_index)},
                {"max_splitting_degree", cfg.pipeline.max_splitting_degree},
                {"fixtures", fixtures},
                {"pinned_embeddings", kPinnedNote},
                {"config_hash", config_hash(config_string(cfg))}};
}

// Each flag is computed independently; null when it cannot be decided
// because an earlier check failed.
Json validation_json(const WeilInput& w, std::optional<Error>& err) {
    Json v;
    v["prime_field"] = is_prime(w.q);
    v["monic_integral"] = w.h.lead() == 1;
    bool sqf = is_squarefree(w.h);
    v["squarefree"] = sqf;
    v["no_real_roots"] = sqf ? Json(count_real_roots(w.h) == 0) : Json(nullptr);
    try {
        validate_weil(w.h, w.q);
        v["weil"] = true;
    } catch (const Error& e) {
        v["weil"] = e.kind() == ErrorKind::NotWeil ? Json(false) : Json(nullptr);
        err = e;
    }
    v["valid"] = !err.has_value();
    return v;
}

// Null after recording the error when the input is not a valid Weil polynomial.
Etale checked_algebra(const WeilInput& w, Json& doc) {
    std::optional<Error> err;
    doc["validation"] = validation_json(w, err);
    if (err) {
        doc["error"] = Json{{"kind", error_kind_name(err->kind())}, {"message", err->what()}};
        return nullptr;
    }
    return EtaleAlgebra::make(w.h, w.q);
}

Json slopes_json(const RatPoly& h, const Int& p) {
    Json s = Json::array();
    for (const auto& r : newton_slopes(h, p)) s.push_back(jrat(r));
    return s;
}

Json type_json(const CMType& t) {
    return Json{{"embeddings", t.embeddings}, {"b", element_string(t.b)}};
}

// Unit fixture: {"label": ..., "units": [[c_0, ..., c_{n-1}], ...]}; every
// entry must be a unit of O_L lying in the computed unit group.
Json load_fixtures(const ReportConfig& cfg, const WeilInput& w, const UnitGroup* U, const Lattice* O) {
    if (cfg.fixtures.empty()) return nullptr;
    std::ifstream in(cfg.fixtures);
    if (!in) fail(ErrorKind::BadFixture, "cannot read " + cfg.fixtures);
    Json f;
    try {
        f = Json::parse(in);
    } catch (const std::exception& e) {
        fail(ErrorKind::BadFixture, std::string("fixture is not JSON: ") + e.what());
    }
    std::string label = format_label(w.h, w.q);
    if (f.value("label", "") != label) return Json{{"path", cfg.fixtures}, {"used", false}};
    std::size_t n = 0;
    if (U && O) {
        const auto& alg = U->algebra()->alg();
        for (const auto& u : f.at("units")) {
            RatVec x;
            for (const auto& c : u) {
                Rat r;
                if (c.is_string()) r = Rat(c.get<std::string>());
                else r = Rat(c.get<long>());
                r.canonicalize();
                x.push_back(r);
            }
            if (x.size() != alg.degree()) fail(ErrorKind::BadFixture, "unit of the wrong length");
            auto inv = alg.inverse(x);
            if (!inv || !lattice_contains(*O, x) || !lattice_contains(*O, *inv))
                fail(ErrorKind::BadFixture, "fixture entry is not a unit of the maximal order");
            if (U->element(U->dlog(x)) != x) fail(ErrorKind::BadFixture, "fixture unit not in the computed unit group");
            ++n;
        }
    }
    return Json{{"path", cfg.fixtures}, {"used", true}, {"verified_units", n}};
}

}  // namespace

std::string config_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_string(const ReportConfig& cfg) {
    std::ostringstream os;
    os << "v1 precision=" << cfg.pipeline.precision << " max_index=" << cfg.pipeline.max_index
       << " max_splitting_degree=" << cfg.pipeline.max_splitting_degree << " fixtures=" << cfg.fixtures;
    return os.str();
}

std::string element_string(const RatVec& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rat c = x[i];
        bool neg = c < 0;
        if (neg) c = -c;
        if (s.empty()) s = neg ? "-" : "";
        else s += neg ? " - " : " + ";
        std::string mono = i == 0 ? "" : (i == 1 ? "F" : "F^" + std::to_string(i));
        if (mono.empty()) s += c.get_str();
        else if (c == 1) s += mono;
        else s += c.get_str() + "*" + mono;
    }
    return s.empty() ? "0" : s;
}

Json error_document(const std::string& command, const WeilInput* w, const Error& e) {
    Json doc;
    doc["command"] = command;
    if (w) doc["input"] = input_json(*w);
    doc["error"] = Json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    return doc;
}

Json info_document(const WeilInput& w, const ReportConfig& cfg) {
    Json doc;
    doc["command"] = "info";
    doc["input"] = input_json(w);
    Etale L = checked_algebra(w, doc);
    if (!L) return doc;
    Json fac = Json::array();
    for (const auto& f : L->factors()) fac.push_back(f.str());
    doc["factors"] = fac;
    doc["p_rank"] = p_rank(L->h(), L->p());
    doc["newton_slopes"] = slopes_json(L->h(), L->p());
    Lattice R = frobenius_order(*L), O = maximal_order(*L);
    doc["rw_index"] = jrat(lattice_index(R, O));
    auto ords = overorders(*L, R, O, cfg.pipeline.max_index);
    long stable = 0, gor = 0;
    for (const auto& o : ords) {
        stable += o.conj_stable;
        gor += o.gorenstein;
    }
    doc["overorders"] = ords.size();
    doc["conj_stable_overorders"] = stable;
    doc["gorenstein_overorders"] = gor;
    doc["metadata"] = metadata(cfg, nullptr);
    return doc;
}

Json rrc_document(const WeilInput& w, const ReportConfig& cfg) {
    Json doc;
    doc["command"] = "rrc";
    doc["input"] = input_json(w);
    Etale L = checked_algebra(w, doc);
    if (!L) return doc;
    doc["p_rank"] = p_rank(L->h(), L->p());
    Lattice O = maximal_order(*L);
    auto m = build_matching(*L, O, cfg.pipeline.max_splitting_degree, cfg.pipeline.precision);
    doc["splitting_field_degree"] = m.M.degree();
    doc["residue_degree"] = m.residue_degree;
    doc["ramification"] = m.ramification;
    Json places = Json::array();
    for (const auto& d : m.places)
        places.push_back(Json{{"e", d.e}, {"f", d.f}, {"slope", jrat(d.slope)}});
    doc["places"] = places;
    Json rows = Json::array();
    long st = 0, res = 0, both = 0;
    for (const auto& t : all_cm_types(*L)) {
        auto r = rrc(*L, t, m);
        Json row = type_json(t);
        row["st"] = r.st;
        row["residue"] = r.residue;
        rows.push_back(row);
        st += r.st;
        res += r.residue;
        both += r.holds();
    }
    doc["types"] = rows;
    doc["st_count"] = st;
    doc["residue_count"] = res;
    doc["rrc_count"] = both;
    doc["metadata"] = metadata(cfg, nullptr);
    return doc;
}

namespace {

Lattice z_plus(const NumberAlgebra& alg, const Lattice& f) {
    RatMatrix B = f.basis();
    RatMatrix rows(B.rows() + 1, B.cols());
    rows.set_row(0, alg.one());
    for (std::size_t i = 0; i < B.rows(); ++i) rows.set_row(i + 1, B.row(i));
    return lattice_from_rows(rows);
}

std::string describe_order(const IsogenyReport& rep, const OrderInfo& o) {
    const auto& C = *rep.context;
    if (o.index == 1) return "O_L";
    if (o.lat == C.R) return "R_w";
    Lattice f = conductor(C.alg(), o.lat, C.O);
    if (z_plus(C.alg(), f) == o.lat) {
        try {
            if (auto y = principal_generator(*C.U, f)) return "Z + (" + element_string(*y) + ")O_L";
        } catch (const Error&) {
        }
    }
    return "order of index " + o.index.get_str();
}

Json counts_json(const OrderReport& o) {
    Json c = Json::array();
    for (const auto& v : o.counts) c.push_back(v);
    return c;
}

}  // namespace

Json ppav_document(const WeilInput& w, const ReportConfig& cfg) {
    Json doc;
    doc["command"] = "ppav";
    doc["input"] = input_json(w);
    Etale L = checked_algebra(w, doc);
    if (!L) return doc;
    auto rep = run_pipeline(L, cfg.pipeline);
    const auto& C = *rep.context;
    Json fixtures = load_fixtures(cfg, w, C.U.get(), &C.O);

    doc["p_rank"] = rep.p_rank;
    doc["newton_slopes"] = slopes_json(L->h(), L->p());
    doc["rw_index"] = jint(rep.rw_index);
    doc["overorders"] = rep.orders.size();
    doc["rrc_available"] = rep.rrc_available;
    Json types = Json::array();
    for (std::size_t k = 0; k < rep.types.size(); ++k) {
        Json t = type_json(rep.types[k]);
        if (rep.rrc_available) {
            t["st"] = rep.rrc[k].st;
            t["residue"] = rep.rrc[k].residue;
        }
        types.push_back(t);
    }
    doc["types"] = types;
    doc["base_type"] = rep.base_type;
    Json cert = Json::array();
    for (const auto& s : rep.certified) cert.push_back(jint(s.index));
    doc["certified_indices"] = cert;
    doc["orbit"] = rep.orbit;

    Json orders = Json::array();
    bool total_known = rep.base_type >= 0;
    long total = 0;
    for (const auto& o : rep.orders) {
        Json jo;
        jo["index"] = jint(o.order.index);
        jo["description"] = describe_order(rep, o.order);
        jo["hnf"] = jlattice(o.order.lat);
        jo["gorenstein"] = o.order.gorenstein;
        jo["conj_stable"] = o.order.conj_stable;
        jo["cond1"] = o.order.conj_stable ? Json(o.cond1) : Json(nullptr);
        jo["cond2"] = o.order.conj_stable ? Json(o.cond2) : Json(nullptr);
        jo["cond5"] = o.order.conj_stable ? Json(o.cond5) : Json(nullptr);
        jo["ppav_count"] = jint(o.ppav_count);
        jo["outcome"] = outcome_name(o.outcome);
        jo["counts"] = counts_json(o);
        Json cls = Json::array();
        for (const auto& c : o.classes) {
            Json jc;
            jc["hnf"] = jlattice(c.ideal);
            if (o.order.conj_stable) {
                jc["self_dual"] = c.i0.has_value();
                jc["i0"] = c.i0 ? Json(element_string(*c.i0)) : Json(nullptr);
                jc["sizes"] = c.sizes;
                Json reps = Json::array();
                for (const auto& r : c.representatives) reps.push_back(element_string(r));
                jc["representatives"] = reps;
            } else {
                jc["self_dual"] = false;
            }
            cls.push_back(jc);
        }
        jo["classes"] = cls;
        jo["ppav"] = ppav_entry(jo);
        if (o.outcome == Outcome::Ambiguous || o.outcome == Outcome::Unknown) total_known = false;
        else
            for (int n : o.counts.at(0)) total += n;
        orders.push_back(jo);
    }
    doc["orders"] = orders;
    doc["ppav_total"] = total_known ? Json(total) : Json(nullptr);
    doc["metadata"] = metadata(cfg, fixtures);
    return doc;
}

std::string ppav_entry(const Json& order) {
    std::string outcome = order.at("outcome");
    if (outcome == "unknown") return "?";
    std::string s;
    for (const auto& v : order.at("counts")) {
        if (!s.empty()) s += " or ";
        std::string one;
        for (const auto& n : v) one += (one.empty() ? "" : "+") + std::to_string(n.get<long>());
        s += one.empty() ? "-" : one;
    }
    return s;
}

std::string ppav_markdown(const Json& doc) {
    std::ostringstream os;
    const auto& in = doc.at("input");
    os << "# " << (in.at("label").is_null() ? in.at("polynomial").get<std::string>() : in.at("label").get<std::string>())
       << "\n\n";
    os << "h = " << in.at("polynomial").get<std::string>() << ", p = " << in.at("p") << ", p-rank "
       << doc.at("p_rank") << ", [O_L : R_w] = " << doc.at("rw_index") << ", " << doc.at("overorders")
       << " overorders\n\n";
    os << "| order T | [O_L : T] | T = conj(T) | cond2(T) | number of ppav |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& o : doc.at("orders")) {
        bool st = o.at("conj_stable");
        os << "| " << o.at("description").get<std::string>() << " | " << o.at("index") << " | "
           << (st ? "true" : "false") << " | " << (st ? (o.at("cond2").get<bool>() ? "true" : "false") : "--")
           << " | " << o.at("ppav").get<std::string>() << " |\n";
    }
    return os.str();
}

std::vector<std::string> check_report_invariants(const Json& doc) {
    std::vector<std::string> bad;
    if (doc.contains("error")) return bad;
    int g = doc.at("input").at("g");
    bool based = doc.at("base_type").get<int>() >= 0;
    if (based && doc.at("orbit").empty()) bad.push_back("empty orbit for a certified base type");
    for (const auto& o : doc.at("orders")) {
        std::string where = "order of index " + o.at("index").dump() + ": ";
        long N = o.at("ppav_count").get<long>();
        std::size_t r = o.at("classes").size();
        std::string outcome = o.at("outcome");
        if (!o.at("conj_stable").get<bool>()) {
            if (outcome != "not_self_dual") bad.push_back(where + "unstable order with a polarization outcome");
            continue;
        }
        auto allowed = [&](long n) { return n == 0 || n == N; };
        for (const auto& c : o.at("classes")) {
            bool sd = c.at("self_dual");
            for (const auto& s : c.at("sizes")) {
                if (!allowed(s.get<long>())) bad.push_back(where + "P1 size outside {0, N}");
                if (!sd && s.get<long>() != 0) bad.push_back(where + "polarization on a class that is not self-dual");
                if (g == 1 && s.get<long>() != 1) bad.push_back(where + "elliptic class without exactly one ppav");
            }
            std::size_t nr = c.at("representatives").size();
            if (nr != 0 && long(nr) != N) bad.push_back(where + "representative count outside {0, N}");
        }
        for (const auto& v : o.at("counts")) {
            if (based && v.size() != r) bad.push_back(where + "count vector length differs from class count");
            for (const auto& n : v)
                if (!allowed(n.get<long>())) bad.push_back(where + "count outside {0, N}");
        }
        if (g == 1 && outcome != "determined") bad.push_back(where + "elliptic order not determined");
    }
    return bad;
}

}  // namespace abvar
