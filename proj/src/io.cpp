#include "gyromodal/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gyromodal/errors.hpp"
#include "gyromodal/system.hpp"

namespace gyromodal {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Eigen::VectorXd parse_vector(const json& j, const std::string& field, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw ParseError("field \"" + field + "\" must be an array of " + std::to_string(n) +
                         " numbers");
    }
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_number()) {
            throw ParseError("field \"" + field + "\" must contain only numbers");
        }
        v(i) = j[i].get<double>();
    }
    return v;
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& field, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw ParseError("field \"" + field + "\" must be a row-major array of " +
                         std::to_string(n) + " rows");
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        m.row(i) = parse_vector(j[i], field, n).transpose();
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

SystemFile load_system_file(const std::string& path, double tol) {
    const json doc = parse_file(path);
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("A") || !doc.contains("B") ||
        !doc.contains("C")) {
        throw ParseError(path + ": expected an object with fields n, A, B, C");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() < 1) {
        throw ParseError(path + ": field \"n\" must be a positive integer");
    }
    const int n = doc["n"].get<int>();

    SystemFile file;
    file.sys = validate_system(parse_matrix(doc["A"], "A", n), parse_matrix(doc["B"], "B", n),
                               parse_matrix(doc["C"], "C", n), tol);
    if (doc.contains("q_star")) {
        file.q_star = parse_vector(doc["q_star"], "q_star", n);
    }
    return file;
}

StateVector load_initial_conditions(const std::string& path, int n) {
    const json doc = parse_file(path);
    if (!doc.is_object() || !doc.contains("eta0") || !doc.contains("etadot0")) {
        throw ParseError(path + ": expected an object with fields eta0, etadot0");
    }
    return StateVector{parse_vector(doc["eta0"], "eta0", n),
                       parse_vector(doc["etadot0"], "etadot0", n)};
}

std::string modes_to_json(const std::vector<ModeRecord>& modes) {
    json doc;
    json freqs = json::array();
    json list = json::array();
    for (const auto& m : modes) {
        freqs.push_back(m.omega);
        json entry;
        entry["omega"] = m.omega;
        entry["h"] = vector_to_json(m.h);
        entry["r"] = vector_to_json(m.r);
        entry["classical"] = m.classical;
        list.push_back(entry);
    }
    doc["frequencies"] = freqs;
    doc["modes"] = list;
    return doc.dump(2) + "\n";
}

std::string modes_to_csv(const std::vector<ModeRecord>& modes) {
    std::ostringstream out;
    const Eigen::Index n = modes.empty() ? 0 : modes.front().h.size();
    out << "omega,classical";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",h_" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",r_" << i;
    out << "\n";
    for (const auto& m : modes) {
        out << format_g17(m.omega) << "," << (m.classical ? 1 : 0);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(m.h(i));
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(m.r(i));
        out << "\n";
    }
    return out.str();
}

std::vector<ModeRecord> load_modes_file(const std::string& path) {
    const json doc = parse_file(path);
    if (!doc.is_object() || !doc.contains("modes") || !doc["modes"].is_array()) {
        throw ParseError(path + ": expected an object with a \"modes\" array");
    }
    std::vector<ModeRecord> modes;
    for (const auto& entry : doc["modes"]) {
        if (!entry.contains("omega") || !entry.contains("h") || !entry.contains("r")) {
            throw ParseError(path + ": each mode needs omega, h, r");
        }
        ModeRecord m;
        m.omega = entry["omega"].get<double>();
        const int n = static_cast<int>(entry["h"].size());
        m.h = parse_vector(entry["h"], "h", n);
        m.r = parse_vector(entry["r"], "r", n);
        m.classical = entry.value("classical", false);
        modes.push_back(std::move(m));
    }
    return modes;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<double>& times,
                          const std::vector<StateVector>& states,
                          const std::vector<double>& energies,
                          const std::vector<StateVector>* reference) {
    const Eigen::Index n = states.empty() ? 0 : states.front().eta.size();
    out << "t";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",eta_" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",etadot_" << i;
    out << ",energy";
    if (reference) {
        for (Eigen::Index i = 1; i <= n; ++i) out << ",rk4_eta_" << i;
        for (Eigen::Index i = 1; i <= n; ++i) out << ",rk4_etadot_" << i;
    }
    out << "\n";
    for (std::size_t row = 0; row < times.size(); ++row) {
        out << format_g17(times[row]);
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(states[row].eta(i));
        for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(states[row].etadot(i));
        out << "," << format_g17(energies[row]);
        if (reference) {
            const StateVector& ref = (*reference)[row];
            for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(ref.eta(i));
            for (Eigen::Index i = 0; i < n; ++i) out << "," << format_g17(ref.etadot(i));
        }
        out << "\n";
    }
}

std::string report_to_json(const InvariantReport& report) {
    json doc;
    json checks = json::array();
    for (const auto& c : report.checks) {
        json entry;
        entry["name"] = c.name;
        entry["measured"] = c.measured;
        entry["bound"] = c.bound;
        entry["pass"] = c.pass;
        checks.push_back(entry);
    }
    doc["checks"] = checks;
    doc["all_passed"] = report.all_passed();
    return doc.dump(2) + "\n";
}

std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

int cli_exit_code(const std::exception& error) {
    if (dynamic_cast<const NotOscillatory*>(&error) ||
        dynamic_cast<const ConvergenceFailure*>(&error) ||
        dynamic_cast<const KernelDimensionMismatch*>(&error) ||
        dynamic_cast<const SingularMatrix*>(&error) ||
        dynamic_cast<const NonFinite*>(&error)) {
        return 3;
    }
    return 2;
}

void apply_tol_overrides(TolProfile& profile, const std::string& overrides) {
    std::istringstream stream(overrides);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError("tolerance override \"" + item + "\" is not key=value");
        }
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParseError("tolerance override \"" + item + "\" has a non-numeric value");
        }
        if (key == "ortho") profile.ortho = value;
        else if (key == "pair") profile.pair = value;
        else if (key == "kernel") profile.kernel = value;
        else if (key == "corresp") profile.corresp = value;
        else if (key == "roundtrip") profile.roundtrip = value;
        else if (key == "eigen") profile.eigen = value;
        else if (key == "gram") profile.gram = value;
        else if (key == "antisym") profile.antisym = value;
        else if (key == "recon") profile.recon = value;
        else if (key == "ode") profile.ode = value;
        else if (key == "conserve") profile.conserve = value;
        else if (key == "agree") profile.agree = value;
        else if (key == "oracle") profile.oracle = value;
        else if (key == "classical") profile.classical = value;
        else throw ParseError("unknown tolerance key \"" + key + "\"");
    }
}

}  // namespace gyromodal
