// SPDX-License-Identifier: Apache-2.0

#include "rrsir/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rrsir {

using nlohmann::json;

namespace {

json summary_to_json(const TrialSummary& s, const CltPrediction& pred) {
    json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    if (s.variance_defined)
        j["variance"] = s.variance;
    else
        j["variance"] = "n/a";
    j["se_mean"] = s.se_mean;
    j["se_var"] = s.se_var;
    j["theory_mean"] = s.theory_mean;
    j["theory_var"] = s.theory_var;
    if (s.variance_defined) {
        j["z_mean"] = s.z_mean;
        if (std::isfinite(s.var_ratio)) j["var_ratio"] = s.var_ratio;
    }
    if (s.ks_defined) j["ks_distance"] = s.ks_distance;
    j["mean_ok"] = s.mean_ok;
    j["var_ok"] = s.var_ok;
    j["provenance"] = pred.provenance;
    return j;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["statistic"] = statistic_name(cfg.statistic);
    j["N"] = cfg.N;
    j["K"] = cfg.K;
    j["sigma2"] = cfg.sigma2;
    j["m"] = cfg.m;
    j["degree"] = cfg.degree;
    j["dist"] = cfg.dist.name();
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["x_choice"] = cfg.x_choice;
    j["threads"] = cfg.threads;
    return j.dump();
}

ExperimentConfig parse_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::runtime_error("config: expected a JSON object");
    static const std::set<std::string> known = {"statistic", "N", "K", "sigma2", "m",
                                                "degree", "dist", "trials", "seed",
                                                "x_choice", "threads"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw std::runtime_error("config: unknown key '" + key + "'");
    for (const char* req : {"statistic", "N", "K", "trials", "seed"})
        if (!j.contains(req))
            throw std::runtime_error(std::string("config: missing key '") + req + "'");

    ExperimentConfig cfg;
    cfg.statistic = statistic_from_name(j.at("statistic").get<std::string>());
    cfg.N = j.at("N").get<int>();
    cfg.K = j.at("K").get<int>();
    cfg.trials = j.at("trials").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sigma2")) cfg.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("m")) cfg.m = j.at("m").get<int>();
    if (j.contains("degree")) cfg.degree = j.at("degree").get<int>();
    if (j.contains("dist")) cfg.dist = EntryDist::from_name(j.at("dist").get<std::string>());
    if (j.contains("x_choice")) cfg.x_choice = j.at("x_choice").get<std::string>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    cfg.validate();
    return cfg;
}

std::string serialize_run(const ExperimentResult& result) {
    std::ostringstream out;
    json head;
    head["schema_version"] = kSchemaVersion;
    head["config"] = json::parse(config_to_json(result.cfg));
    out << head.dump() << '\n';
    for (std::size_t t = 0; t < result.values.size(); ++t) {
        json row;
        row["trial"] = t;
        row["value"] = result.values[t];
        out << row.dump() << '\n';
    }
    json tail;
    tail["summary"] = summary_to_json(result.summary, result.prediction);
    out << tail.dump() << '\n';
    return out.str();
}

RunRecord parse_run(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    RunRecord rec;
    if (!std::getline(in, line)) throw std::runtime_error("run record: empty input");
    const json head = json::parse(line);
    rec.schema_version = head.at("schema_version").get<int>();
    rec.config = parse_config(head.at("config").dump());
    std::string prev;
    while (std::getline(in, line)) {
        const json row = json::parse(line);
        if (row.contains("summary")) {
            const json& s = row.at("summary");
            rec.summary.n = s.at("n").get<long>();
            rec.summary.mean = s.at("mean").get<double>();
            if (s.at("variance").is_number()) {
                rec.summary.variance = s.at("variance").get<double>();
                rec.summary.variance_defined = true;
            }
            rec.summary.theory_mean = s.at("theory_mean").get<double>();
            rec.summary.theory_var = s.at("theory_var").get<double>();
            rec.prediction.mean = rec.summary.theory_mean;
            rec.prediction.variance = rec.summary.theory_var;
            rec.prediction.provenance = s.at("provenance").get<std::string>();
            return rec;
        }
        const std::size_t t = row.at("trial").get<std::size_t>();
        if (t != rec.values.size())
            throw std::runtime_error("run record: trial rows out of order");
        rec.values.push_back(row.at("value").get<double>());
    }
    throw std::runtime_error("run record: missing summary line");
}

std::string histogram_csv(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (values.empty()) throw std::invalid_argument("histogram: no values");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn;
    double hi = *mx;
    if (lo == hi) hi = lo + 1.0;
    const double width = (hi - lo) / bins;
    std::vector<long> counts(bins, 0);
    for (const double v : values) {
        int b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    std::ostringstream out;
    out << "lower_edge,upper_edge,count\n";
    for (int b = 0; b < bins; ++b)
        out << format_double(lo + b * width) << ',' << format_double(lo + (b + 1) * width)
            << ',' << counts[b] << '\n';
    return out.str();
}

}  // namespace rrsir
