#pragma once

#include "vc2reg/core/rational.hpp"
#include "vc2reg/report.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vc2reg {

using LogFloat = boost::multiprecision::cpp_bin_float_100;

// ---------------------------------------------------------------------------------------
// Symbolic positive reals: prod base^exponent, optionally widened by a ceiling slack,
// with an exact rational alongside whenever it fits the digit budget.

inline constexpr double kExactDigitBudget = 20000;

inline std::map<BigInt, Rational> small_factors(BigInt n) {
    if (n <= 0) throw std::invalid_argument("small_factors: need a positive integer");
    std::map<BigInt, Rational> f;
    for (unsigned p = 2; p < 10000 && n > 1; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            f[BigInt(p)] += 1;
            n /= p;
        }
        if (BigInt(p) * p > n) break;
    }
    if (n > 1) f[n] += 1;  // prime or an unfactored cofactor; either way a valid base
    return f;
}

class SymValue {
public:
    SymValue() = default;

    static SymValue of(const Rational& r) {
        if (r <= 0) throw std::invalid_argument("SymValue: value must be positive");
        SymValue v;
        for (auto& [b, e] : small_factors(numerator(r))) v.factors_[b] += e;
        for (auto& [b, e] : small_factors(denominator(r))) v.factors_[b] -= e;
        v.prune();
        v.exact_ = r;
        return v;
    }

    SymValue operator*(const SymValue& o) const {
        SymValue v = *this;
        for (const auto& [b, e] : o.factors_) v.factors_[b] += e;
        v.prune();
        v.lo_off_ += o.lo_off_;
        v.hi_off_ += o.hi_off_;
        v.ceiled_ = ceiled_ || o.ceiled_;
        v.exact_.reset();
        if (exact_ && o.exact_ && digits(*exact_) + digits(*o.exact_) <= kExactDigitBudget) v.exact_ = *exact_ * *o.exact_;
        return v;
    }
    SymValue operator/(const SymValue& o) const { return *this * o.pow(-1); }

    SymValue pow(const Rational& e) const {
        SymValue v;
        for (const auto& [b, x] : factors_) v.factors_[b] = x * e;
        v.prune();
        v.lo_off_ = e >= 0 ? lo_off_ * to_float(e) : hi_off_ * to_float(e);
        v.hi_off_ = e >= 0 ? hi_off_ * to_float(e) : lo_off_ * to_float(e);
        v.ceiled_ = ceiled_;
        if (exact_ && denominator(e) == 1 && digits(*exact_) * std::abs(to_double(e)) <= kExactDigitBudget) {
            const long long n = numerator(e).convert_to<long long>();
            Rational base = n >= 0 ? *exact_ : 1 / *exact_;
            v.exact_ = rpow(base, static_cast<unsigned>(n >= 0 ? n : -n));
        }
        return v;
    }

    // ceil(x) lies in [x, x + 1).
    SymValue ceil() const {
        SymValue v = *this;
        v.ceiled_ = true;
        const LogFloat hi = log_hi();
        LogFloat upper;  // log(e^hi + 1)
        if (hi > 200)
            upper = hi + exp(-hi);
        else
            upper = log(exp(hi) + 1);
        v.hi_off_ = upper - monomial_log();
        if (exact_) v.exact_ = Rational(ceil_of(*exact_));
        return v;
    }

    const std::map<BigInt, Rational>& factors() const { return factors_; }
    const std::optional<Rational>& exact() const { return exact_; }
    bool has_ceiling() const { return ceiled_; }

    LogFloat monomial_log() const {
        LogFloat s = 0;
        for (const auto& [b, e] : factors_) s += to_float(e) * log(LogFloat(b));
        return s;
    }
    // Rounding allowance for the 100-digit logs.
    LogFloat log_error() const {
        LogFloat err = LogFloat("1e-90");
        for (const auto& [b, e] : factors_) err += abs(to_float(e)) * (abs(log(LogFloat(b))) + 1) * LogFloat("1e-95");
        return err;
    }
    LogFloat log_lo() const { return monomial_log() + lo_off_ - log_error(); }
    LogFloat log_hi() const { return monomial_log() + hi_off_ + log_error(); }

    // Decimal order of magnitude, mantissa x 10^exponent, from the log midpoint.
    std::string scientific() const {
        const LogFloat l10 = (monomial_log() + (lo_off_ + hi_off_) / 2) / log(LogFloat(10));
        const LogFloat e = floor(l10);
        const LogFloat mant = boost::multiprecision::pow(LogFloat(10), l10 - e);
        std::ostringstream s;
        s << std::setprecision(6) << mant.convert_to<double>() << "e" << e.convert_to<long long>();
        return s.str();
    }
    std::string monomial_string() const {
        if (factors_.empty()) return "1";
        std::ostringstream s;
        bool first = true;
        for (const auto& [b, e] : factors_) {
            s << (first ? "" : " * ") << b;
            if (e != 1) s << "^(" << to_string(e) << ")";
            first = false;
        }
        return s.str();
    }
    std::string symbolic() const { return ceiled_ ? "ceil~[" + monomial_string() + "]" : monomial_string(); }

private:
    static LogFloat to_float(const Rational& r) { return LogFloat(numerator(r)) / LogFloat(denominator(r)); }
    static double digits(const Rational& r) {
        return static_cast<double>(msb_or0(numerator(r)) + msb_or0(denominator(r))) * 0.30103 + 2;
    }
    static std::size_t msb_or0(const BigInt& v) { return v == 0 ? 0 : msb(abs(v)) + 1; }
    void prune() {
        for (auto it = factors_.begin(); it != factors_.end();)
            it = it->second == 0 ? factors_.erase(it) : std::next(it);
    }

    std::map<BigInt, Rational> factors_;
    LogFloat lo_off_ = 0, hi_off_ = 0;  // log(value) in [monomial + lo_off, monomial + hi_off]
    bool ceiled_ = false;
    std::optional<Rational> exact_;
};

// a < b: exactly when both values are exact, otherwise from disjoint log intervals; nullopt if undecided.
inline std::optional<bool> sym_less(const SymValue& a, const SymValue& b) {
    if (a.exact() && b.exact()) return *a.exact() < *b.exact();
    if (a.log_hi() < b.log_lo()) return true;
    if (a.log_lo() >= b.log_hi()) return false;
    return std::nullopt;
}

inline Json sym_json(const SymValue& v) {
    Json j;
    j["symbolic"] = v.symbolic();
    j["scientific"] = v.scientific();
    std::ostringstream lo, hi;
    lo << std::setprecision(30) << (v.log_lo() / log(LogFloat(10)));
    hi << std::setprecision(30) << (v.log_hi() / log(LogFloat(10)));
    j["log10_interval"] = {lo.str(), hi.str()};
    if (v.exact()) {
        const auto n = num(*v.exact());
        j["exact"] = n["exact"];
        j["decimal"] = n["decimal"];
    }
    return j;
}

// ---------------------------------------------------------------------------------------
// eps2 family: eps2(x) = coeff * x^(-power).

struct Eps2Function {
    Rational coeff{1, 10};
    Rational power = 0;

    Rational at(std::size_t x) const {
        if (power == 0) return coeff;
        if (denominator(power) != 1 || power < 0) throw std::invalid_argument("Eps2Function: non-integer power needs symbolic evaluation");
        return coeff / rpow(Rational(x), power.convert_to<unsigned>());
    }
    SymValue at(const SymValue& x) const { return SymValue::of(coeff) * x.pow(-power); }
    void validate() const {
        if (coeff <= 0 || coeff > 1 || power < 0) throw std::invalid_argument("eps2 function must map into (0,1]");
    }
};

// ---------------------------------------------------------------------------------------

enum class ScheduleMode { desk, paper };

inline const char* to_string(ScheduleMode m) { return m == ScheduleMode::desk ? "desk" : "paper"; }

struct PaperConstants {
    Rational c1;
    SymValue eps1, tau1, delta, eps1_prime, eps1_dblprime, m, ell1, f_eps1;
    Eps2Function eps2;

    SymValue eps2_at(const SymValue& x) const { return eps2.at(x); }
    // eps2'(x) = eps1'' eps2(x) eps2(2^4 delta^(-8k-10))
    SymValue eps2_prime(const SymValue& x, int k) const {
        const SymValue inner = SymValue::of(16) * delta.pow(-(8 * k + 10));
        return eps1_dblprime * eps2.at(x) * eps2.at(inner);
    }
    // eps2''(x) = eps2(delta^-4 m^4) eps2'(x)^5 / 4
    SymValue eps2_dblprime(const SymValue& x, int k) const {
        const SymValue inner = delta.pow(-4) * m.pow(4);
        return eps2.at(inner) * eps2_prime(x, k).pow(5) / SymValue::of(4);
    }
};

struct ScheduleCheck {
    std::string name;
    std::optional<bool> holds;  // nullopt: the log intervals could not separate the two sides
};

struct TuningSchedule {
    ScheduleMode mode = ScheduleMode::desk;

    // Targets for the output decomposition.
    Rational eps1{1, 10};
    Eps2Function eps2_fn;
    int k = 1, D = 1;
    std::size_t t0 = 1;  // caller-supplied; not derived

    // Desk thresholds.
    Rational classify_eps1{1000};   // dev23 bound used to split regular from Ferr triads
    Rational classify_eps2{1, 10};  // dev2 bound for pair-parts at density 1/l
    Rational f_val{1, 10};
    Rational delta{1, 10};            // packing similarity
    Rational packing_eps{1, 10};      // color-2 budget in packing
    Rational psi_coeff{1, 10};        // Psi threshold coeff * l^3 * t
    Rational nontrivial_coeff{1, 4};  // cluster size >= coeff * l / m_ij
    Rational omega2_coeff{1, 10};     // |R2 cap cell| <= coeff |A||B||C|
    Rational omega3_coeff{1, 10};     // |Tr cap cell| <= coeff |cell|
    Rational claim_slack{1, 10};      // claim-hom threshold 1 - slack
    Rational sigma_slack{1, 10};      // Sigma3 threshold 1 - slack
    Rational mu{1, 10};               // homogeneity reports
    std::size_t ell1 = 0;             // 0: m_max^2
    std::size_t m_cap = 0;            // 0: no cap on clusters per pair
    Rational split_delta{1, 5};
    std::size_t split_max_attempts = 20;

    std::optional<PaperConstants> paper;

    Rational eps2_target(std::size_t parts) const { return eps2_fn.at(parts); }
};

inline void validate_desk(const TuningSchedule& s) {
    auto in_open01 = [](const Rational& x) { return x > 0 && x < 1; };
    if (s.mode != ScheduleMode::desk) throw std::invalid_argument("schedule is not in desk mode");
    // delta = f_val is the documented default pair, so the order is non-strict here.
    if (!(s.delta > 0 && s.delta <= s.f_val && s.f_val < Rational(1, 2)))
        throw std::invalid_argument("desk schedule needs 0 < delta <= f_val < 1/2");
    for (const auto* x : {&s.classify_eps2, &s.packing_eps, &s.claim_slack, &s.sigma_slack, &s.mu, &s.eps1})
        if (!in_open01(*x) && *x != 1) throw std::invalid_argument("desk schedule: a fraction lies outside (0,1]");
    if (s.classify_eps1 <= 0) throw std::invalid_argument("desk schedule: classify_eps1 must be positive");
    if (s.psi_coeff <= 0 || s.nontrivial_coeff < 0 || s.omega2_coeff < 0 || s.omega3_coeff < 0 || s.split_delta <= 0)
        throw std::invalid_argument("desk schedule: negative coefficient");
    s.eps2_fn.validate();
}

inline TuningSchedule desk_schedule() { return TuningSchedule{}; }

inline TuningSchedule derive_paper_schedule(const Rational& eps1, int k, int D, const Rational& c1,
                                            const Eps2Function& eps2 = {}) {
    if (eps1 <= 0 || eps1 >= 1) throw std::invalid_argument("derive_paper_schedule: eps1 must lie in (0,1)");
    if (k < 1 || D < 1) throw std::invalid_argument("derive_paper_schedule: k and D must be >= 1");
    if (c1 <= 0) throw std::invalid_argument("derive_paper_schedule: c1 surrogate must be positive");
    eps2.validate();
    TuningSchedule s;
    s.mode = ScheduleMode::paper;
    s.eps1 = eps1;
    s.k = k;
    s.D = D;
    s.eps2_fn = eps2;
    PaperConstants p;
    p.c1 = c1;
    p.eps2 = eps2;
    p.eps1 = SymValue::of(eps1);
    const SymValue c = SymValue::of(c1);
    p.tau1 = p.eps1.pow(4 * D);
    p.delta = p.tau1.pow(400) / SymValue::of(1000);
    p.eps1_prime = (p.delta / (SymValue::of(8) * c)).pow(2 * k + 1000);
    p.m = (SymValue::of(2) * c * (p.delta / SymValue::of(8)).pow(-2 * k - 2)).ceil();
    p.eps1_dblprime = p.eps1_prime.pow(2) / SymValue::of(1000);
    p.ell1 = (p.delta.pow(-4) * p.m.pow(4)).ceil();
    p.f_eps1 = p.eps1.pow(Rational(1, D));
    s.paper = std::move(p);
    return s;
}

// The ordering chain for eps1-type constants, tau1 < f(eps1), and eps2'' < eps2' < eps2 at sample points.
inline std::vector<ScheduleCheck> schedule_checks(const TuningSchedule& s) {
    if (!s.paper) throw std::invalid_argument("schedule_checks: no paper constants");
    const auto& p = *s.paper;
    std::vector<ScheduleCheck> out;
    out.push_back({"eps1'' < eps1'", sym_less(p.eps1_dblprime, p.eps1_prime)});
    out.push_back({"eps1' < delta", sym_less(p.eps1_prime, p.delta)});
    out.push_back({"delta < tau1", sym_less(p.delta, p.tau1)});
    out.push_back({"tau1 < eps1", sym_less(p.tau1, p.eps1)});
    out.push_back({"tau1 < f(eps1)", sym_less(p.tau1, p.f_eps1)});
    const std::vector<std::pair<std::string, SymValue>> points{
        {"1", SymValue::of(1)}, {"2", SymValue::of(2)}, {"ell1", p.ell1}};
    for (const auto& [name, x] : points) {
        const SymValue e2 = p.eps2_at(x), e2p = p.eps2_prime(x, s.k), e2pp = p.eps2_dblprime(x, s.k);
        out.push_back({"eps2''(" + name + ") < eps2'(" + name + ")", sym_less(e2pp, e2p)});
        out.push_back({"eps2'(" + name + ") < eps2(" + name + ")", sym_less(e2p, e2)});
    }
    return out;
}

inline bool all_checks_hold(const std::vector<ScheduleCheck>& cs) {
    for (const auto& c : cs)
        if (!c.holds || !*c.holds) return false;
    return true;
}

// ---------------------------------------------------------------------------------------
// JSON

inline Json eps2_json(const Eps2Function& f) { return {{"coeff", num(f.coeff)}, {"power", num(f.power)}}; }

inline Json schedule_to_json(const TuningSchedule& s) {
    Json j;
    j["mode"] = to_string(s.mode);
    j["eps1"] = num(s.eps1);
    j["eps2_fn"] = eps2_json(s.eps2_fn);
    j["k"] = s.k;
    j["D"] = s.D;
    j["t0"] = s.t0;
    if (s.mode == ScheduleMode::desk) {
        j["classify_eps1"] = num(s.classify_eps1);
        j["classify_eps2"] = num(s.classify_eps2);
        j["f_val"] = num(s.f_val);
        j["delta"] = num(s.delta);
        j["packing_eps"] = num(s.packing_eps);
        j["psi_coeff"] = num(s.psi_coeff);
        j["nontrivial_coeff"] = num(s.nontrivial_coeff);
        j["omega2_coeff"] = num(s.omega2_coeff);
        j["omega3_coeff"] = num(s.omega3_coeff);
        j["claim_slack"] = num(s.claim_slack);
        j["sigma_slack"] = num(s.sigma_slack);
        j["mu"] = num(s.mu);
        j["ell1"] = s.ell1;
        j["m_cap"] = s.m_cap;
        j["split_delta"] = num(s.split_delta);
        j["split_max_attempts"] = s.split_max_attempts;
    }
    if (s.paper) {
        const auto& p = *s.paper;
        Json c;
        c["c1"] = num(p.c1);
        c["tau1"] = sym_json(p.tau1);
        c["delta"] = sym_json(p.delta);
        c["eps1_prime"] = sym_json(p.eps1_prime);
        c["eps1_dblprime"] = sym_json(p.eps1_dblprime);
        c["m"] = sym_json(p.m);
        c["ell1"] = sym_json(p.ell1);
        c["f_eps1"] = sym_json(p.f_eps1);
        c["eps2_prime_at_ell1"] = sym_json(p.eps2_prime(p.ell1, s.k));
        c["eps2_dblprime_at_ell1"] = sym_json(p.eps2_dblprime(p.ell1, s.k));
        c["t0_note"] = "caller-supplied";
        j["constants"] = c;
        Json checks = Json::array();
        for (const auto& ch : schedule_checks(s))
            checks.push_back({{"name", ch.name}, {"holds", ch.holds ? Json(*ch.holds) : Json("undecided")}});
        j["checks"] = checks;
    }
    return j;
}

// Accepts either a numeric pair object or a plain string / integer for each rational field.
inline Rational json_rational(const Json& j) {
    if (j.is_object()) return num_value(j);
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw std::invalid_argument("expected a rational (string like \"1/10\" or an integer)");
}

inline TuningSchedule schedule_from_json(const Json& j) {
    const std::string mode = j.value("mode", std::string("desk"));
    Eps2Function f;
    if (j.contains("eps2_fn")) {
        if (j["eps2_fn"].contains("coeff")) f.coeff = json_rational(j["eps2_fn"]["coeff"]);
        if (j["eps2_fn"].contains("power")) f.power = json_rational(j["eps2_fn"]["power"]);
    }
    if (mode == "paper") {
        const Rational eps1 = json_rational(j.at("eps1"));
        const Rational c1 = j.contains("c1") ? json_rational(j["c1"]) : Rational(1);
        auto s = derive_paper_schedule(eps1, j.value("k", 1), j.value("D", 1), c1, f);
        s.t0 = j.value("t0", std::size_t{1});
        return s;
    }
    if (mode != "desk") throw std::invalid_argument("schedule mode must be 'desk' or 'paper'");
    TuningSchedule s;
    s.eps2_fn = f;
    auto rat = [&](const char* key, Rational& field) {
        if (j.contains(key)) field = json_rational(j[key]);
    };
    rat("eps1", s.eps1);
    rat("classify_eps1", s.classify_eps1);
    rat("classify_eps2", s.classify_eps2);
    rat("f_val", s.f_val);
    rat("delta", s.delta);
    rat("packing_eps", s.packing_eps);
    rat("psi_coeff", s.psi_coeff);
    rat("nontrivial_coeff", s.nontrivial_coeff);
    rat("omega2_coeff", s.omega2_coeff);
    rat("omega3_coeff", s.omega3_coeff);
    rat("claim_slack", s.claim_slack);
    rat("sigma_slack", s.sigma_slack);
    rat("mu", s.mu);
    rat("split_delta", s.split_delta);
    s.k = j.value("k", 1);
    s.D = j.value("D", 1);
    s.t0 = j.value("t0", std::size_t{1});
    s.ell1 = j.value("ell1", std::size_t{0});
    s.m_cap = j.value("m_cap", std::size_t{0});
    s.split_max_attempts = j.value("split_max_attempts", std::size_t{20});
    validate_desk(s);
    return s;
}

}  // namespace vc2reg
