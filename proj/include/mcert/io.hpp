#ifndef MCERT_IO_HPP
#define MCERT_IO_HPP

// JSON input format for purported forms and JSON serialization of
// certificates. All real numbers travel as decimal strings so no precision is
// lost to binary floating point on either side.

#include "certifier.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace mcert {

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io {

using nlohmann::json;

inline Ball ball_from_json_string(const json& j, const char* what, double declared_rad = 0.0) {
    if (!j.is_string()) throw input_error(std::string(what) + " must be a decimal string");
    try {
        return Ball::from_string(j.get<std::string>(), declared_rad);
    } catch (const std::exception& e) {
        throw input_error(std::string(what) + ": " + e.what());
    }
}

inline i64 int_from_json(const json& j, const char* what) {
    if (j.is_number_integer()) return j.get<i64>();
    if (j.is_string()) {
        try {
            return std::stoll(j.get<std::string>());
        } catch (...) {
        }
    }
    throw input_error(std::string(what) + " must be an integer");
}

inline DirichletCharacter character_from_json(const json& j, i64 level) {
    if (!j.is_object() || !j.contains("kind"))
        throw input_error("character must be an object with a \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    i64 modulus = int_from_json(j.at("modulus"), "character.modulus");
    if (modulus != level) throw input_error("character modulus must equal the level");
    if (kind == "conrey") {
        i64 index = int_from_json(j.at("index"), "character.index");
        return DirichletCharacter::conrey(modulus, index);
    }
    if (kind == "table") {
        std::vector<std::array<i64, 3>> rows;
        for (const auto& row : j.at("values")) {
            if (!row.is_array() || row.size() != 3)
                throw input_error("character.values rows must be [r, num, den]");
            rows.push_back({int_from_json(row[0], "character value residue"),
                            int_from_json(row[1], "character value numerator"),
                            int_from_json(row[2], "character value denominator")});
        }
        return DirichletCharacter::from_table(modulus, rows);
    }
    throw input_error("character.kind must be \"conrey\" or \"table\"");
}

inline std::pair<i64, i64> parse_fraction(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return {std::stoll(s), 1};
        return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
    } catch (...) {
        throw input_error("bad cusp fraction: " + s);
    }
}

}  // namespace io

inline PurportedForm form_from_json(const nlohmann::json& j) {
    using io::int_from_json;
    PurportedForm f;
    try {
        f.N = int_from_json(j.at("level"), "level");
        if (f.N < 1) throw input_error("level must be >= 1");
        f.chi = io::character_from_json(j.at("character"), f.N);
        double crad = 0.0;
        if (j.contains("coefficient_radius"))
            crad = std::stod(j.at("coefficient_radius").get<std::string>());
        if (!(crad >= 0)) throw input_error("coefficient_radius must be >= 0");
        f.coefficient_radius = crad;
        f.lambda = io::ball_from_json_string(j.at("lambda"), "lambda", crad);
        f.M0 = int_from_json(j.at("M0"), "M0");
        if (f.M0 < 1) throw input_error("M0 must be >= 1");
        std::string sym = j.at("symmetry").get<std::string>();
        if (sym == "odd")
            f.symmetry = Symmetry::Odd;
        else if (sym == "even")
            f.symmetry = Symmetry::Even;
        else
            throw input_error("symmetry must be \"odd\" or \"even\"");
        for (const auto& row : j.at("coefficients_infinity")) {
            if (!row.is_array() || row.size() != 3)
                throw input_error("coefficients_infinity rows must be [\"p\", \"re\", \"im\"]");
            i64 p = int_from_json(row[0], "coefficient index");
            if (!is_prime(p)) throw input_error("coefficient index " + std::to_string(p) +
                                                " is not prime");
            f.prime_coeffs[p] = CBall(io::ball_from_json_string(row[1], "coefficient re", crad),
                                      io::ball_from_json_string(row[2], "coefficient im", crad));
        }
        if (j.contains("cusp_units")) {
            for (const auto& row : j.at("cusp_units")) {
                if (!row.is_array() || row.size() != 3)
                    throw input_error("cusp_units rows must be [\"a/b\", \"re\", \"im\"]");
                auto [a, b] = io::parse_fraction(row[0].get<std::string>());
                i64 d = 0;
                bool found = false;
                for (i64 h : hall_divisors(f.N))
                    if (cusps_equivalent(f.N, a, b, 1, h)) {
                        d = h;
                        found = true;
                        break;
                    }
                if (!found)
                    throw input_error("cusp " + row[0].get<std::string>() +
                                      " is not equivalent to a Hall cusp");
                f.hall_units[d] = CBall(io::ball_from_json_string(row[1], "cusp unit re", crad),
                                        io::ball_from_json_string(row[2], "cusp unit im", crad));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("malformed input: ") + e.what());
    }
    f.finalize();
    return f;
}

inline PurportedForm load_form(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("invalid JSON: ") + e.what());
    }
    return form_from_json(j);
}

inline nlohmann::json certificate_to_json(const Certificate& c) {
    using nlohmann::json;
    json out;
    out["bound"] = c.bound;
    out["lambda"] = c.lambda_mid;
    out["m"] = c.m;
    out["psi_count"] = c.psi_count;
    out["delta"] = c.delta.upper_string(20);
    out["D"] = json::array({c.D.lower_string(25), c.D.upper_string(25)});
    out["N_Tm"] = c.NTm.upper_string(25);
    json E = json::array();
    for (const auto& r : c.regions) {
        json e;
        e["matrix"] = json::array({json::array({r.matrix.a, r.matrix.b}),
                                   json::array({r.matrix.c, r.matrix.d})});
        if (r.exact_zero)
            e["bound_sq"] = json::array({"0", "0"});
        else
            e["bound_sq"] = json::array({r.bound_sq.lower_string(25), r.bound_sq.upper_string(25)});
        E.push_back(std::move(e));
    }
    out["E"] = std::move(E);
    json params;
    params["level"] = c.level;
    params["taylor_degree"] = c.taylor_degree;
    params["samples"] = c.n_samples;
    params["M0"] = c.M0;
    params["precision_bits"] = c.precision_bits;
    params["psi_modulus"] = c.psi_modulus.lower_string(25);
    params["psi_modulus_variant"] = c.psi_modulus_variant.lower_string(25);
    params["psi_variants_differ"] = c.psi_variants_differ;
    params["max_E"] = c.maxE.upper_string(25);
    params["seconds_total"] = c.seconds_total;
    params["seconds_regions"] = c.seconds_regions;
    params["seconds_D"] = c.seconds_d;
    out["parameters"] = std::move(params);
    if (c.cm_checked) {
        json cm;
        cm["nearest_n"] = c.cm_nearest_n;
        cm["distance"] = c.cm_distance.lower_string(25);
        out["cm_exclusion"] = std::move(cm);
    }
    return out;
}

}  // namespace mcert

#endif
