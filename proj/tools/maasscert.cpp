// Command-line front end: certify a purported Maass cusp form, inspect coset
// representatives and cusps for a level, or evaluate the Whittaker function
// with certified error bounds.

#include <mcert/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotCertified = 3;

long resolve_precision(long cli_value) {
    if (cli_value > 0) return cli_value;
    if (const char* env = std::getenv("MAASS_CERT_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 64) return v;
        throw mcert::input_error("MAASS_CERT_PRECISION must be an integer >= 64");
    }
    return 128;
}

int run_certify(const std::string& input, const std::string& output, long prec,
                const mcert::CertifyOptions& opt) {
    mcert::set_precision(prec);
    mcert::PurportedForm form = mcert::load_form(input);
    mcert::Certificate cert = mcert::certify(form, opt);
    nlohmann::json j = mcert::certificate_to_json(cert);
    if (output.empty() || output == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot open output file: " + output);
        out << j.dump(2) << "\n";
    }
    std::cerr << "certified |lambda_true - lambda| <= " << cert.bound << "\n";
    return kExitOk;
}

int run_domain(mcert::i64 level, mcert::i64 conrey_index) {
    using namespace mcert;
    DirichletCharacter chi =
        conrey_index > 0 ? DirichletCharacter::conrey(level, conrey_index)
                         : DirichletCharacter::conrey(level, 1);
    CosetSystem sys = coset_representatives(level, chi);
    nlohmann::json j;
    j["level"] = level;
    j["index"] = static_cast<long long>(sys.reps.size());
    nlohmann::json reps = nlohmann::json::array();
    for (size_t i = 0; i < sys.reps.size(); ++i) {
        const Mat& m = sys.reps[i];
        nlohmann::json e;
        e["matrix"] = nlohmann::json::array(
            {nlohmann::json::array({m.a, m.b}), nlohmann::json::array({m.c, m.d})});
        const Cusp& cu = sys.cusp_of(i);
        e["cusp"] = cu.str();
        e["width"] = cu.width;
        reps.push_back(std::move(e));
    }
    j["representatives"] = std::move(reps);
    nlohmann::json cusps = nlohmann::json::array();
    for (const auto& cu : sys.cusps) {
        nlohmann::json e;
        e["cusp"] = cu.str();
        e["width"] = cu.width;
        cusps.push_back(std::move(e));
    }
    j["cusps"] = std::move(cusps);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_whittaker(const std::string& r_str, const std::string& y_str, long prec) {
    using namespace mcert;
    set_precision(prec);
    Ball r = Ball::from_string(r_str);
    Ball y = Ball::from_string(y_str);
    if (!y.is_positive()) throw input_error("whittaker: y must be > 0");
    Ball lambda = sqr(r) + Ball(1) / Ball(4);
    WhittakerEvaluator ev(lambda, r);
    auto [W, Wp] = ev.whittaker(y);
    nlohmann::json j;
    j["r"] = r.mid_string(30);
    j["y"] = y.mid_string(30);
    j["W"] = nlohmann::json::array({W.lower_string(30), W.upper_string(30)});
    j["W_prime"] = nlohmann::json::array({Wp.lower_string(30), Wp.upper_string(30)});
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified eigenvalue bounds for purported Maass cusp forms"};
    app.require_subcommand(1);

    std::string input, output;
    long precision = 0;
    mcert::CertifyOptions opt;
    long long m_override = 0;
    double delta_cap = 0.0;

    auto* certify = app.add_subcommand("certify", "certify a purported form from a JSON file");
    certify->add_option("--input", input, "input JSON file")->required();
    certify->add_option("--output", output, "certificate JSON file ('-' for stdout)");
    certify->add_option("--precision", precision, "working precision in bits (default 128)");
    certify->add_option("--taylor-degree", opt.taylor_degree, "Taylor expansion degree");
    certify->add_option("--samples", opt.n_samples, "sample points per arc");
    certify->add_option("--m", m_override, "Hecke operator index override");
    long long M0_override = 0;
    certify->add_option("--M0", M0_override, "truncate coefficient tables to n <= M0");
    certify->add_option("--delta-cap", delta_cap, "upper cap on delta");
    certify->add_option("--threads", opt.threads, "worker threads for region bounds");
    certify->add_option("--subdivide", opt.subdivisions,
                        "sub-boxes per axis in the polynomial sup (0 = auto)");

    long long dom_level = 1;
    long long dom_index = 0;
    auto* domain = app.add_subcommand("domain", "print coset representatives and cusps");
    domain->add_option("--level", dom_level, "level N")->required();
    domain->add_option("--character-index", dom_index, "Conrey index (default: trivial)");

    std::string w_r, w_y;
    auto* whittaker = app.add_subcommand("whittaker", "evaluate W_ir(y) with certified bounds");
    whittaker->add_option("--r", w_r, "spectral parameter r (decimal)")->required();
    whittaker->add_option("--y", w_y, "argument y > 0 (decimal)")->required();
    whittaker->add_option("--precision", precision, "working precision in bits (default 128)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (m_override > 0) opt.m_override = m_override;
        if (M0_override > 0) opt.M0_override = M0_override;
        if (delta_cap > 0) opt.delta_cap = delta_cap;
        long prec = resolve_precision(precision);
        if (prec < 64) throw mcert::input_error("precision must be >= 64 bits");
        if (certify->parsed()) return run_certify(input, output, prec, opt);
        if (domain->parsed()) return run_domain(dom_level, dom_index);
        if (whittaker->parsed()) return run_whittaker(w_r, w_y, prec);
    } catch (const mcert::input_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mcert::domain_error& e) {
        std::cerr << "not certified: " << e.what() << "\n";
        return kExitNotCertified;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
