#include "ssclab/capacities.hpp"

namespace ssclab {

json to_json(const SplittingCertificate& c) { return to_json(c.isometry); }

SplittingCertificate split_certificate_from_json(const json& j, const std::string& path) {
    return {isometry_from_json(j, path)};
}

json to_json(const RateEstimate& r, const ObjectiveSpec& obj) {
    json j;
    j["objective"] = r.objective_name;
    if (obj.id == Objective::G) j["class"] = to_string(obj.cls);
    if (obj.id == Objective::SsAssisted) j["ss_dim"] = obj.ss_dim;
    if (obj.id == Objective::GGeneral && obj.lambda) j["lambda"] = to_json(*obj.lambda);
    j["value"] = r.value;
    j["dims"] = {r.dims.first, r.dims.second};
    j["seed"] = r.seed;
    j["restarts"] = r.restarts_used;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    json per = json::array();
    for (const auto& d : r.per_dim) {
        json e{{"dims", {d.dims.first, d.dims.second}}, {"skipped", d.skipped}};
        if (!d.skipped) e["value"] = d.value;
        per.push_back(std::move(e));
    }
    j["per_dim"] = std::move(per);
    j["trace"] = r.trace;
    if (const auto* split = std::get_if<SplittingCertificate>(&r.certificate)) {
        j["certificate"] = {{"kind", "splitting"}, {"isometry", to_json(*split)}};
    } else {
        j["certificate"] = {{"kind", "instrument"}, {"instrument", to_json(std::get<Instrument>(r.certificate))}};
    }
    return j;
}

}  // namespace ssclab
