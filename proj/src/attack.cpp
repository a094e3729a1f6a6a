#include "stlf/attack.hpp"

#include "stlf/error.hpp"
#include "stlf/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace stlf {

const char* to_string(AttackKind kind) noexcept { return kind == AttackKind::Gaussian ? "gaussian" : "bounded_opt"; }

AttackKind parse_attack_kind(std::string_view text) {
    if (text == "gaussian" || text == "GAUSSIAN") return AttackKind::Gaussian;
    if (text == "bounded_opt" || text == "BOUNDED_OPT") return AttackKind::BoundedOpt;
    throw Error(ErrorKind::InvalidArgument, "attack kind must be gaussian or bounded_opt, got '" + std::string(text) + "'");
}

double parse_norm_order(std::string_view text) {
    if (text == "1") return 1.0;
    if (text == "2") return 2.0;
    if (text == "inf" || text == "Inf" || text == "INF") return kInfNorm;
    throw Error(ErrorKind::InvalidArgument, "norm order must be 1, 2 or inf, got '" + std::string(text) + "'");
}

std::string norm_order_name(double p) {
    if (p == 1.0) return "1";
    if (p == 2.0) return "2";
    if (p == kInfNorm) return "inf";
    return text::format_exact(p);
}

void AttackSpec::validate() const {
    if (kind == AttackKind::Gaussian) {
        if (!std::isfinite(mean)) throw Error(ErrorKind::InvalidArgument, "attack mean must be finite");
        if (!(sd >= 0.0) || !std::isfinite(sd)) throw Error(ErrorKind::InvalidArgument, "attack sd must be >= 0");
        return;
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
    if (p != 1.0 && p != 2.0 && p != kInfNorm) throw Error(ErrorKind::InvalidArgument, "p must be 1, 2 or inf");
    if (direction != 1 && direction != -1) throw Error(ErrorKind::InvalidArgument, "direction must be +1 or -1");
    if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 1");
    if (!(step_size >= 0.0) || !std::isfinite(step_size)) {
        throw Error(ErrorKind::InvalidArgument, "step_size must be > 0 (0 selects epsilon/50)");
    }
}

double AttackResult::total_shift() const { return std::accumulate(forecast_shift.begin(), forecast_shift.end(), 0.0); }

TimeSeries inject_gaussian(const TimeSeries& temperature, const AttackSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> out(temperature.values().begin(), temperature.values().end());
    for (double& v : out) v += spec.mean + spec.sd * z(rng);
    return temperature.with_values(std::move(out));
}

double lp_norm(std::span<const double> x, double p) {
    double s = 0.0;
    if (p == kInfNorm) {
        for (double v : x) s = std::max(s, std::abs(v));
        return s;
    }
    if (p == 1.0) {
        for (double v : x) s += std::abs(v);
        return s;
    }
    if (p == 2.0) {
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    for (double v : x) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

namespace {

std::vector<double> project_l1(std::span<const double> v, double epsilon) {
    // Sort-based projection onto the simplex of the absolute values.
    std::vector<double> u(v.size());
    std::transform(v.begin(), v.end(), u.begin(), [](double x) { return std::abs(x); });
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double t = (cumulative - epsilon) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::max(std::abs(v[i]) - theta, 0.0);
        out[i] = std::copysign(mag, v[i]);
    }
    return out;
}

}  // namespace

std::vector<double> project_lp(std::span<const double> delta, double epsilon, double p) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
    std::vector<double> out(delta.begin(), delta.end());
    if (p == kInfNorm) {
        for (double& v : out) v = std::clamp(v, -epsilon, epsilon);
        return out;
    }
    if (p != 1.0 && p != 2.0) throw Error(ErrorKind::InvalidArgument, "p must be 1, 2 or inf");
    const double norm = lp_norm(out, p);
    if (norm <= epsilon) return out;
    if (p == 2.0) {
        const double s = epsilon / norm;
        for (double& v : out) v *= s;
    } else {
        out = project_l1(delta, epsilon);
    }
    // Rounding can leave the computed norm a few ulps above epsilon; shrink
    // until the floating-point norm is inside the ball.
    const std::vector<double> base = out;
    double s = 1.0;
    while (lp_norm(out, p) > epsilon) {
        s = std::nextafter(s, 0.0) * (1.0 - 1e-15);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] * s;
    }
    return out;
}

ForecastPolynomial::ForecastPolynomial(const FittedModel& model, const ZoneSeries& zone) {
    // With temperature set to 1 every entry of the design is the non-temperature
    // factor of its column, so the model collapses to a cubic in T per row.
    std::vector<double> ones(zone.temperature.size(), 1.0);
    const ZoneSeries unit_zone{zone.load, zone.temperature.with_values(std::move(ones))};
    const DesignMatrix x = build_design_for_columns(model.kind, unit_zone, model.options, model.labels);
    rows_ = x.source_rows;
    coef_.assign(x.rows(), {0.0, 0.0, 0.0, 0.0});
    for (std::size_t c = 0; c < x.cols(); ++c) {
        const int power = x.columns[c].temperature_power;
        if (power < 0 || power > 3) throw Error(ErrorKind::InvalidArgument, "temperature power above 3");
        if (power > 0) depends_on_t_ = true;
        const double beta = model.coefficients[c];
        for (std::size_t r = 0; r < x.rows(); ++r) coef_[r][static_cast<std::size_t>(power)] += beta * x.at(r, c);
    }
}

double ForecastPolynomial::value(std::size_t r, double t) const {
    const auto& c = coef_[r];
    return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
}

double ForecastPolynomial::derivative(std::size_t r, double t) const {
    const auto& c = coef_[r];
    return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]);
}

double attack_objective(const FittedModel& model, const ZoneSeries& zone, std::span<const double> delta,
                        int direction) {
    if (delta.size() != zone.temperature.size()) throw Error(ErrorKind::LengthMismatch, "delta length differs from zone");
    std::vector<double> t(zone.temperature.values().begin(), zone.temperature.values().end());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += delta[i];
    const ZoneSeries attacked{zone.load, zone.temperature.with_values(std::move(t))};
    const auto y = forecast(model, attacked);
    return direction * std::accumulate(y.begin(), y.end(), 0.0);
}

std::vector<double> attack_gradient(const FittedModel& model, const ZoneSeries& zone, std::span<const double> delta,
                                    int direction) {
    if (delta.size() != zone.temperature.size()) throw Error(ErrorKind::LengthMismatch, "delta length differs from zone");
    const ForecastPolynomial poly(model, zone);
    std::vector<double> g(delta.size(), 0.0);
    for (std::size_t r = 0; r < poly.rows().size(); ++r) {
        const std::size_t i = poly.rows()[r];
        g[i] = direction * poly.derivative(r, zone.temperature[i] + delta[i]);
    }
    return g;
}

namespace {

AttackResult finish(const FittedModel& model, const ZoneSeries& zone, std::vector<double> delta, double p) {
    AttackResult out;
    std::vector<double> t(zone.temperature.values().begin(), zone.temperature.values().end());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += delta[i];
    out.perturbed_temperature = zone.temperature.with_values(std::move(t));
    const auto clean = forecast(model, zone);
    const auto attacked = forecast(model, ZoneSeries{zone.load, out.perturbed_temperature});
    out.forecast_shift.resize(clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) out.forecast_shift[i] = attacked[i] - clean[i];
    out.delta_norm = lp_norm(delta, p);
    out.delta = std::move(delta);
    return out;
}

}  // namespace

AttackResult optimize_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec,
                             std::optional<RowRange> window) {
    if (spec.kind != AttackKind::BoundedOpt) throw Error(ErrorKind::InvalidArgument, "optimize_attack needs bounded_opt");
    spec.validate();
    const ForecastPolynomial poly(model, zone);
    if (!poly.depends_on_temperature()) {
        throw Error(ErrorKind::NotTemperatureDependent, "no model column depends on temperature");
    }

    // The attacker controls the hours that feed a forecast row inside the window.
    const RowRange range = window.value_or(RowRange{0, zone.temperature.size()});
    if (range.first >= range.second || range.second > zone.temperature.size()) {
        throw Error(ErrorKind::InvalidArgument, "attack window is empty or out of range");
    }
    std::vector<std::size_t> active;  // indices into poly.rows()
    for (std::size_t r = 0; r < poly.rows().size(); ++r) {
        const std::size_t i = poly.rows()[r];
        if (i >= range.first && i < range.second) active.push_back(r);
    }
    if (active.empty()) throw Error(ErrorKind::InvalidArgument, "attack window contains no forecast rows");

    const double gamma = spec.direction;
    const double step = spec.effective_step();
    std::vector<double> temp(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) temp[k] = zone.temperature[poly.rows()[active[k]]];
    const auto gain = [&](const std::vector<double>& d) {
        double s = 0.0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            s += poly.value(active[k], temp[k] + d[k]) - poly.value(active[k], temp[k]);
        }
        return gamma * s;
    };

    std::vector<double> d(active.size(), 0.0);
    std::vector<double> best = d;
    double best_gain = 0.0;
    std::vector<double> g(active.size());
    std::size_t iters = 0;
    while (iters < spec.max_iters) {
        ++iters;
        for (std::size_t k = 0; k < active.size(); ++k) {
            g[k] = d[k] + step * gamma * poly.derivative(active[k], temp[k] + d[k]);
        }
        auto next = project_lp(g, spec.epsilon, spec.p);
        const bool moved = next != d;
        d = std::move(next);
        const double value = gain(d);
        if (value > best_gain) {
            best_gain = value;
            best = d;
        }
        if (!moved) break;
    }

    std::vector<double> delta(zone.temperature.size(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) delta[poly.rows()[active[k]]] = best[k];
    AttackResult out = finish(model, zone, std::move(delta), spec.p);
    out.iterations_used = iters;
    out.feasible = out.delta_norm <= spec.epsilon;
    out.objective_gain = best_gain;
    return out;
}

AttackResult gaussian_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec) {
    if (spec.kind != AttackKind::Gaussian) throw Error(ErrorKind::InvalidArgument, "gaussian_attack needs gaussian");
    const TimeSeries noisy = inject_gaussian(zone.temperature, spec);
    std::vector<double> delta(noisy.size());
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = noisy[i] - zone.temperature[i];
    AttackResult out = finish(model, zone, std::move(delta), spec.p);
    out.perturbed_temperature = noisy;
    out.objective_gain = spec.direction * out.total_shift();
    return out;
}

AttackResult run_attack(const FittedModel& model, const ZoneSeries& zone, const AttackSpec& spec) {
    return spec.kind == AttackKind::Gaussian ? gaussian_attack(model, zone, spec) : optimize_attack(model, zone, spec);
}

std::string attack_summary_header() {
    return "kind,zone,seed,mean,sd,epsilon,p,direction,delta_norm,total_shift_mw,iterations,feasible";
}

std::string attack_summary_row(const AttackSpec& spec, const AttackResult& result) {
    std::ostringstream out;
    const bool bounded = spec.kind == AttackKind::BoundedOpt;
    out << to_string(spec.kind) << ',' << spec.target_zone << ',' << spec.seed << ',';
    out << (bounded ? "" : text::format_exact(spec.mean)) << ',' << (bounded ? "" : text::format_exact(spec.sd)) << ',';
    out << (bounded ? text::format_exact(spec.epsilon) : "") << ',' << norm_order_name(spec.p) << ','
        << (bounded ? std::to_string(spec.direction) : "") << ',';
    out << text::format_exact(result.delta_norm) << ',' << text::format_exact(result.total_shift()) << ','
        << result.iterations_used << ',';
    out << (result.feasible ? (*result.feasible ? "true" : "false") : "n/a") << '\n';
    return out.str();
}

}  // namespace stlf
