#include "splineids/model_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "splineids/errors.hpp"

namespace splineids {

namespace {

constexpr const char* kFormatName = "splineids-model";

nlohmann::json basis_to_json(const std::optional<SplineBasisSpecd>& basis) {
    if (!basis) return {{"kind", "none"}};
    return {{"kind", std::string(to_string(basis->kind()))},
            {"degree", basis->degree()},
            {"interior_knots", basis->interior_knots().to_std()},
            {"domain", {basis->domain().first, basis->domain().second}}};
}

std::optional<SplineBasisSpecd> basis_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "none") return std::nullopt;
    const auto knots = j.at("interior_knots").get<std::vector<double>>();
    const auto domain = j.at("domain").get<std::vector<double>>();
    if (domain.size() != 2) throw ModelLoadError("basis domain must have two entries");
    return SplineBasisSpecd(basis_kind_from_string(kind), j.at("degree").get<int>(), KnotVectord::from(knots),
                            {domain[0], domain[1]});
}

}  // namespace

std::string serialize_model(const SavedModel& saved) {
    const LogisticModel& m = saved.model;
    nlohmann::json j;
    j["format"] = kFormatName;
    j["version"] = kModelFormatVersion;
    j["model"] = std::string(to_token(saved.kind));
    j["threshold"] = saved.threshold;
    j["basis"] = basis_to_json(m.basis);
    j["intercept"] = m.intercept;
    j["coefficients"] = std::vector<double>(m.coefficients.data(), m.coefficients.data() + m.coefficients.size());
    j["converged"] = m.converged;
    j["iterations"] = m.iterations;
    j["separation"] = m.separation_flag;
    j["log_likelihood"] = m.log_likelihood;
    return j.dump(2) + "\n";
}

SavedModel deserialize_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelLoadError(std::string("not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != kFormatName) throw ModelLoadError("not a model file");
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw ModelLoadError("unsupported model version " + j.at("version").dump());

        SavedModel saved;
        saved.kind = model_kind_from_token(j.at("model").get<std::string>());
        saved.threshold = j.at("threshold").get<double>();
        LogisticModel& m = saved.model;
        m.basis = basis_from_json(j.at("basis"));
        m.intercept = j.at("intercept").get<double>();
        const auto coefs = j.at("coefficients").get<std::vector<double>>();
        m.coefficients = Eigen::Map<const Eigen::VectorXd>(coefs.data(), static_cast<Eigen::Index>(coefs.size()));
        m.converged = j.at("converged").get<bool>();
        m.iterations = j.at("iterations").get<int>();
        m.separation_flag = j.at("separation").get<bool>();
        m.log_likelihood = j.at("log_likelihood").get<double>();

        const Eigen::Index expected = m.basis ? m.basis->dimension() : 1;
        if (m.coefficients.size() != expected)
            throw ModelLoadError("coefficient count " + std::to_string(m.coefficients.size()) +
                                 " does not match basis dimension " + std::to_string(expected));
        return saved;
    } catch (const ModelLoadError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ModelLoadError(std::string("malformed model: ") + e.what());
    } catch (const Error& e) {
        throw ModelLoadError(e.what());
    }
}

void save_model(const std::filesystem::path& path, const SavedModel& saved) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << serialize_model(saved);
}

SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelLoadError("cannot open " + path.string());
    return deserialize_model(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace splineids
