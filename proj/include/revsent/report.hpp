#pragma once

#include <charconv>
#include <string>

#include <json.hpp>

#include "revsent/eval.hpp"

namespace revsent::report {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline nlohmann::ordered_json to_json(const eval::PrecisionRecallF1& m) {
    nlohmann::ordered_json j;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    return j;
}

inline nlohmann::ordered_json to_json(const eval::MetricsReport& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["config_fingerprint"] = r.config_fingerprint;
    j["train_size"] = r.train_size;
    j["synthetic_samples"] = r.synthetic_samples;
    j["test_size"] = r.test_size;
    j["accuracy"] = r.accuracy;
    j["precision"] = r.positive.precision;
    j["recall"] = r.positive.recall;
    j["f1"] = r.positive.f1;
    j["auc"] = r.auc;
    j["minority"] = to_json(r.minority);
    j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}};
    return j;
}

inline std::string metrics_json(const eval::MetricsReport& r) { return to_json(r).dump(2) + "\n"; }

/// Two-column fpr,tpr table for external plotting.
inline std::string roc_csv(const eval::RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& p : curve) out += format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
    return out;
}

}  // namespace revsent::report
