#pragma once

#include <json.hpp>

#include "abvar/label.hpp"
#include "abvar/pol.hpp"

namespace abvar {

using Json = nlohmann::ordered_json;

struct ReportConfig {
    PipelineConfig pipeline;
    std::string fixtures;  // path of a unit fixture file, empty for none
};

/// Validation, factorization, p-rank, [O_L : R_w] and overorder counts.
Json info_document(const WeilInput& w, const ReportConfig& cfg);
/// Shimura-Taniyama and residue flags per CM-type.
Json rrc_document(const WeilInput& w, const ReportConfig& cfg);
/// Full principal polarization report.
Json ppav_document(const WeilInput& w, const ReportConfig& cfg);
/// {"error": {kind, message}} with the input echo.
Json error_document(const std::string& command, const WeilInput* w, const Error& e);

/// Table with one row per order: description, index, conjugation
/// stability, cond2 and the ppav outcome.
std::string ppav_markdown(const Json& doc);
/// The ppav column entry of an order, e.g. "1+1" or "0+0+4+4 or 0+0+0+0".
std::string ppav_entry(const Json& order);

/// Runtime invariants of a ppav document; returns the violations.
std::vector<std::string> check_report_invariants(const Json& doc);

/// Stable 64-bit FNV-1a hash, hex encoded.
std::string config_hash(const std::string& s);
std::string config_string(const ReportConfig& cfg);

/// Element of L as a polynomial in F, e.g. "1 + 1/8*F^6".
std::string element_string(const RatVec& x);

}  // namespace abvar
