#include "ssclab/serialize.hpp"

namespace ssclab {

namespace {

json subsystems_to_json(const std::vector<Subsystem>& subs) {
    json arr = json::array();
    for (const auto& s : subs) arr.push_back({{"name", s.name}, {"dim", s.dim}});
    return arr;
}

json flat_to_json(const cplx* data, std::size_t n, auto&& at) {
    json re = json::array(), im = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx v = at(i);
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    (void)data;
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError("missing field '" + std::string(key) + "'", path + "." + key);
    return j.at(key);
}

std::vector<Subsystem> subsystems_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError("expected an array of subsystems", path);
    std::vector<Subsystem> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& name = require(j[i], "name", p);
        const json& dim = require(j[i], "dim", p);
        if (!name.is_string()) throw ValidationError("subsystem name must be a string", p + ".name");
        if (!dim.is_number_integer() || dim.get<long long>() < 1) {
            throw ValidationError("subsystem dim must be a positive integer", p + ".dim");
        }
        out.push_back({name.get<std::string>(), static_cast<std::size_t>(dim.get<long long>())});
    }
    return out;
}

std::vector<cplx> flat_from_json(const json& data, std::size_t n, const std::string& path) {
    const json& re = require(data, "re", path);
    const json& im = require(data, "im", path);
    if (!re.is_array() || re.size() != n) {
        throw ValidationError("expected " + std::to_string(n) + " real parts", path + ".re");
    }
    if (!im.is_array() || im.size() != n) {
        throw ValidationError("expected " + std::to_string(n) + " imaginary parts", path + ".im");
    }
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!re[i].is_number()) throw ValidationError("non-numeric entry", path + ".re[" + std::to_string(i) + "]");
        if (!im[i].is_number()) throw ValidationError("non-numeric entry", path + ".im[" + std::to_string(i) + "]");
        out[i] = cplx(re[i].get<double>(), im[i].get<double>());
    }
    return out;
}

json matrix_data(const Mat& m) {
    const auto cols = static_cast<std::size_t>(m.cols());
    return flat_to_json(m.data(), static_cast<std::size_t>(m.size()), [&](std::size_t i) {
        return m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols));
    });
}

Mat matrix_from_flat(const std::vector<cplx>& flat, std::size_t rows, std::size_t cols) {
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * cols + c];
    }
    return m;
}

}  // namespace

json to_json(const LabeledState& s) {
    json j;
    j["subsystems"] = subsystems_to_json(s.subsystems());
    j["kind"] = s.is_pure() ? "pure" : "mixed";
    if (s.is_pure()) {
        const Vec& a = s.amplitudes();
        j["data"] = flat_to_json(a.data(), static_cast<std::size_t>(a.size()), [&](std::size_t i) { return a(static_cast<Eigen::Index>(i)); });
    } else {
        j["data"] = matrix_data(s.density_matrix());
    }
    return j;
}

json to_json(const IsometryMap& iso) {
    json j;
    j["kind"] = "isometry";
    j["inputs"] = subsystems_to_json(iso.inputs());
    j["subsystems"] = subsystems_to_json(iso.outputs());
    j["data"] = matrix_data(iso.matrix());
    return j;
}

json to_json(const QuantumChannel& ch) {
    return {{"stinespring", to_json(ch.stinespring())}, {"env_labels", ch.env_labels()}};
}

json matrix_to_json(const Mat& m) {
    json j = matrix_data(m);
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    return j;
}

json to_json(const Instrument& inst) {
    json branches = json::array();
    for (const auto& br : inst.branches) {
        json kraus = json::array();
        for (const auto& k : br.kraus) kraus.push_back(matrix_to_json(k));
        branches.push_back({{"weight", br.weight}, {"kraus", std::move(kraus)}});
    }
    return {{"class", to_string(inst.class_tag)}, {"branches", std::move(branches)}};
}

LabeledState state_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("state must be a JSON object", "$");
    auto subs = subsystems_from_json(require(j, "subsystems", "$"), "$.subsystems");
    const json& kind = require(j, "kind", "$");
    const std::size_t d = total_dim(subs);
    const json& data = require(j, "data", "$");
    if (kind == "pure") {
        const auto flat = flat_from_json(data, d, "$.data");
        Vec v(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = flat[i];
        try {
            return LabeledState::pure(std::move(subs), std::move(v));
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), "$.data");
        }
    }
    if (kind == "mixed") {
        const auto flat = flat_from_json(data, d * d, "$.data");
        try {
            return LabeledState::mixed(std::move(subs), matrix_from_flat(flat, d, d));
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), "$.data");
        }
    }
    throw ValidationError("kind must be \"pure\" or \"mixed\"", "$.kind");
}

IsometryMap isometry_from_json(const json& j, const std::string& path) {
    auto inputs = subsystems_from_json(require(j, "inputs", path), path + ".inputs");
    auto outputs = subsystems_from_json(require(j, "subsystems", path), path + ".subsystems");
    const std::size_t din = total_dim(inputs), dout = total_dim(outputs);
    const auto flat = flat_from_json(require(j, "data", path), din * dout, path + ".data");
    try {
        return IsometryMap(std::move(inputs), std::move(outputs), matrix_from_flat(flat, dout, din));
    } catch (const ValidationError& e) {
        throw ValidationError(e.what(), path + ".data");
    }
}

QuantumChannel channel_from_json(const json& j) {
    IsometryMap iso = isometry_from_json(require(j, "stinespring", "$"), "$.stinespring");
    const json& env = require(j, "env_labels", "$");
    if (!env.is_array()) throw ValidationError("env_labels must be an array", "$.env_labels");
    Labels labels;
    for (const auto& e : env) {
        if (!e.is_string()) throw ValidationError("env label must be a string", "$.env_labels");
        labels.push_back(e.get<std::string>());
    }
    try {
        return QuantumChannel(std::move(iso), std::move(labels));
    } catch (const ValidationError& e) {
        throw ValidationError(e.what(), "$.env_labels");
    }
}

Mat matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
    return matrix_from_flat(flat_from_json(j, rows * cols, path), rows, cols);
}

Instrument instrument_from_json(const json& j, const std::string& path) {
    Instrument inst;
    inst.class_tag = instrument_class_from_string(require(j, "class", path).get<std::string>());
    const json& branches = require(j, "branches", path);
    if (!branches.is_array()) throw ValidationError("branches must be an array", path + ".branches");
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const std::string bp = path + ".branches[" + std::to_string(k) + "]";
        InstrumentBranch br;
        br.weight = require(branches[k], "weight", bp).get<double>();
        const json& kraus = require(branches[k], "kraus", bp);
        for (std::size_t i = 0; i < kraus.size(); ++i) {
            const std::string kp = bp + ".kraus[" + std::to_string(i) + "]";
            const auto rows = require(kraus[i], "rows", kp).get<std::size_t>();
            const auto cols = require(kraus[i], "cols", kp).get<std::size_t>();
            br.kraus.push_back(matrix_from_json(kraus[i], rows, cols, kp));
        }
        inst.branches.push_back(std::move(br));
    }
    validate_instrument(inst);
    return inst;
}

}  // namespace ssclab
