#include "hetvol/additive.hpp"
#include "hetvol/errors.hpp"
#include "hetvol/simulate.hpp"
#include "hetvol/stats.hpp"
#include "hetvol/variance_models.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace hetvol;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<double> uniform_draws(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = u(rng);
    return out;
}

struct TwoTermData {
    std::vector<double> x1, x2, y;
};

TwoTermData two_term_data(std::size_t n, std::uint64_t seed) {
    TwoTermData d{uniform_draws(n, seed, 0.0, 1.0), uniform_draws(n, seed + 1, -2.0, 2.0), {}};
    const auto e = oracle::normal_draws(n, seed + 2, 0.3);
    d.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.y[i] = 1.5 + std::sin(6.0 * d.x1[i]) + 0.5 * d.x2[i] * d.x2[i] + e[i];
    }
    return d;
}

SimSpec iid_spec(std::uint64_t seed) {
    SimSpec s;
    s.seed = seed;
    s.garch.omega = 25.0;
    s.garch.alpha = 0.0;
    s.garch.beta = 0.0;
    s.garch.a = 0.0;
    return s;
}

}  // namespace

TEST_CASE("single smooth term equals fit_smoother plus intercept", "[additive]") {
    const auto d = two_term_data(300, 5);
    const auto basis = SplineBasis::uniform_for(d.x1, 10);
    const auto fit = fit_additive(d.y, {TermSpec::smooth("x1", d.x1, basis, LambdaPolicy::fixed(2.0))});
    const auto direct = fit_smoother(d.x1, d.y, std::vector<double>(d.y.size(), 1.0), 2.0, basis);
    const double ym = std::accumulate(d.y.begin(), d.y.end(), 0.0) / double(d.y.size());
    CHECK_THAT(fit.intercept, WithinAbs(ym, 1e-12));
    CHECK(max_abs_diff(fit.term("x1").contribution, direct.fitted) < 1e-10);
    CHECK_THAT(fit.term("x1").edf, WithinAbs(direct.edf, 1e-10));
    CHECK(fit.converged);
}

TEST_CASE("two-term backfitting matches the stacked penalized least-squares solve", "[additive]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto d = two_term_data(400, 100 * seed);
        const auto b1 = SplineBasis::uniform_for(d.x1, 12);
        const auto b2 = SplineBasis::uniform_for(d.x2, 8);
        const double l1 = 0.5 * double(seed), l2 = 4.0 / double(seed);
        BackfitOptions opt;
        opt.max_iter = 2000;
        opt.tol = 1e-12;
        const auto fit = fit_additive(d.y,
                                      {TermSpec::smooth("x1", d.x1, b1, LambdaPolicy::fixed(l1)),
                                       TermSpec::smooth("x2", d.x2, b2, LambdaPolicy::fixed(l2))},
                                      opt);
        REQUIRE(fit.converged);
        const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(d.y.data(), Eigen::Index(d.y.size()));
        const Eigen::VectorXd joint = oracle::joint_pls_fit(y, b1.design(d.x1), b1.penalty(), l1,
                                                            b2.design(d.x2), b2.penalty(), l2);
        const std::vector<double> expected(joint.data(), joint.data() + joint.size());
        CHECK(max_abs_diff(fit.fitted, expected) <= 1e-6);
    }
}

TEST_CASE("constant response", "[additive]") {
    const auto x = uniform_draws(200, 3, 0.0, 5.0);
    const std::vector<double> y(200, 42.0);
    const auto fit = fit_additive(y, {TermSpec::smooth("x", x, SplineBasis::uniform_for(x, 10))});
    CHECK_THAT(fit.intercept, WithinAbs(42.0, 1e-12));
    for (double v : fit.term("x").contribution) CHECK(std::abs(v) < 1e-10);
    CHECK(fit.rss < 1e-18);
}

TEST_CASE("additive fit invariants", "[additive]") {
    const auto d = two_term_data(500, 17);
    const auto dummy_src = uniform_draws(500, 19, 0.0, 1.0);
    std::vector<double> dummy(500);
    for (std::size_t i = 0; i < dummy.size(); ++i) dummy[i] = dummy_src[i] < 0.05 ? 1.0 : 0.0;
    std::vector<double> y(d.y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= 2.0 * dummy[i];
    const auto b1 = SplineBasis::uniform_for(d.x1, 12);
    const auto b2 = SplineBasis::uniform_for(d.x2, 8);
    const std::vector<TermSpec> terms{TermSpec::smooth("x1", d.x1, b1), TermSpec::smooth("x2", d.x2, b2),
                                      TermSpec::linear("dummy", dummy)};
    const auto fit = fit_additive(y, terms);

    SECTION("centered smooths, intercept, re-assembly and rss") {
        for (const auto& name : {"x1", "x2"}) {
            const auto& c = fit.term(name).contribution;
            CHECK(std::abs(std::accumulate(c.begin(), c.end(), 0.0) / double(c.size())) < 1e-8);
        }
        const double ym = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
        const double dm = std::accumulate(dummy.begin(), dummy.end(), 0.0) / double(dummy.size());
        CHECK_THAT(fit.intercept, WithinAbs(ym - fit.term("dummy").coefficient * dm, 1e-10));
        double rss = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double f = fit.intercept;
            for (const auto& t : fit.terms) f += t.contribution[i];
            CHECK(f == fit.fitted[i]);
            rss += fit.residuals[i] * fit.residuals[i];
        }
        CHECK(rss == fit.rss);
        CHECK_THAT(fit.term("dummy").coefficient, WithinAbs(-2.0, 0.3));
        CHECK_THAT(fit.total_edf,
                   WithinAbs(1.0 + (fit.term("x1").edf - 1.0) + (fit.term("x2").edf - 1.0) + 1.0, 1e-12));
    }
    SECTION("term ordering does not change fitted values at fixed smoothing parameters") {
        BackfitOptions opt;
        opt.max_iter = 2000;
        opt.tol = 1e-10;
        const std::vector<TermSpec> fixed{TermSpec::smooth("x1", d.x1, b1, LambdaPolicy::fixed(1.0)),
                                          TermSpec::smooth("x2", d.x2, b2, LambdaPolicy::fixed(10.0)),
                                          TermSpec::linear("dummy", dummy)};
        const std::vector<TermSpec> reordered{fixed[2], fixed[1], fixed[0]};
        const auto a = fit_additive(y, fixed, opt);
        const auto b = fit_additive(y, reordered, opt);
        CHECK(max_abs_diff(a.fitted, b.fitted) <= 1e-6);
    }
    SECTION("an all-zero dummy leaves the fit unchanged") {
        const std::vector<double> zeros(500, 0.0);
        const auto without = fit_additive(d.y, {terms[0], terms[1]});
        const auto with = fit_additive(d.y, {terms[0], terms[1], TermSpec::linear("dummy", zeros)});
        CHECK(max_abs_diff(without.fitted, with.fitted) <= 1e-10);
        CHECK(with.term("dummy").edf == 0.0);
        CHECK_THAT(with.total_edf, WithinAbs(without.total_edf, 1e-10));
    }
    SECTION("input errors") {
        CHECK_THROWS_AS(fit_additive(y, {}), std::invalid_argument);
        CHECK_THROWS_AS(fit_additive(y, {terms[0], terms[0]}), std::invalid_argument);
        std::vector<double> shorter(d.x1.begin(), d.x1.end() - 1);
        CHECK_THROWS_AS(fit_additive(y, {TermSpec::smooth("x1", shorter, b1)}), std::invalid_argument);
        std::vector<double> bad(y);
        bad[3] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(fit_additive(bad, {terms[0]}), std::invalid_argument);
    }
}

TEST_CASE("ANOVA for nested additive fits", "[additive]") {
    const auto d = two_term_data(400, 23);
    const auto b1 = SplineBasis::uniform_for(d.x1, 12);
    const auto b2 = SplineBasis::uniform_for(d.x2, 8);
    const auto full = fit_additive(d.y, {TermSpec::smooth("x1", d.x1, b1), TermSpec::smooth("x2", d.x2, b2)});
    const auto reduced = fit_additive(d.y, {TermSpec::smooth("x2", d.x2, b2)});

    SECTION("identical models give F = 0 and p = 1") {
        const auto r = anova_nested(full, full, full.n());
        CHECK(r.f_stat == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SECTION("a real effect is detected and the statistic follows the formula") {
        CHECK(full.rss <= reduced.rss * (1.0 + 1e-8));
        const auto r = anova_nested(full, reduced, full.n());
        const double df1 = full.total_edf - reduced.total_edf;
        const double df2 = double(full.n()) - full.total_edf;
        CHECK_THAT(r.df_num, WithinAbs(df1, 1e-12));
        CHECK_THAT(r.df_den, WithinAbs(df2, 1e-12));
        CHECK_THAT(r.f_stat, WithinAbs(((reduced.rss - full.rss) / df1) / (full.rss / df2), 1e-9));
        CHECK(r.p_value < 1e-10);
        CHECK(r.p_value >= 0.0);
    }
    SECTION("swapped models give F = 0 and p = 1") {
        const auto r = anova_nested(reduced, full, full.n());
        CHECK(r.f_stat == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SECTION("a smaller RSS without more edf is an error") {
        AdditiveFit f, g;
        f.fitted.assign(100, 0.0);
        g.fitted.assign(100, 0.0);
        f.rss = 10.0;
        f.total_edf = 5.0;
        g.rss = 12.0;
        g.total_edf = 6.0;
        CHECK_THROWS_AS(anova_nested(f, g, 100), FitError);
        g.total_edf = 5.0;
        CHECK_THROWS_AS(anova_nested(f, g, 100), FitError);
        g.total_edf = 4.0;
        CHECK_NOTHROW(anova_nested(f, g, 100));
        CHECK_THROWS_AS(anova_nested(f, g, 99), std::invalid_argument);
    }
}

TEST_CASE("mean model recovers known components", "[additive][mean-model]") {
    const SimSpec spec = iid_spec(7);
    const auto sim = simulate(spec);
    const auto mf = fit_mean_model(sim.prices, sim.calendar, sim.res);
    REQUIRE(mf.rows.size() == spec.n_days - 7);
    CHECK(mf.rows.front() == 7);

    std::vector<double> trend, dayyear, dayweek, res, lag1, lag7;
    for (std::size_t d : mf.rows) {
        trend.push_back(spec.mean.trend(d, spec.n_days));
        dayyear.push_back(spec.mean.dayyear(sim.calendar.dayyear[d]));
        dayweek.push_back(spec.mean.dayweek(sim.calendar.dayweek[d]));
        res.push_back(spec.mean.res_effect(sim.res.value(d), spec.res.level));
        lag1.push_back(spec.mean.lag1 * sim.prices.value(d - 1));
        lag7.push_back(spec.mean.lag7 * sim.prices.value(d - 7));
    }
    CHECK(pearson_correlation(mf.fit.term("trend").contribution, trend) >= 0.95);
    CHECK(pearson_correlation(mf.fit.term("dayyear").contribution, dayyear) >= 0.95);
    CHECK(pearson_correlation(mf.fit.term("dayweek").contribution, dayweek) >= 0.95);
    CHECK(pearson_correlation(mf.fit.term("res").contribution, res) >= 0.95);
    CHECK(pearson_correlation(mf.fit.term("price_lag1").contribution, lag1) >= 0.95);
    CHECK(pearson_correlation(mf.fit.term("price_lag7").contribution, lag7) >= 0.95);
    CHECK_THAT(mf.fit.term("bank").coefficient, WithinAbs(spec.mean.bank_coefficient, 2.0));

    SECTION("RES effect decreases over the central 80% of the RES range") {
        auto r = sim.res.present_values();
        std::sort(r.begin(), r.end());
        const double lo = r[r.size() / 10], hi = r[r.size() * 9 / 10];
        const auto& term = mf.fit.term("res");
        double prev = term.predict(lo);
        for (int i = 1; i <= 50; ++i) {
            const double v = term.predict(lo + (hi - lo) * i / 50.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    SECTION("residual and fitted series line up with the price series") {
        for (std::size_t k = 0; k < mf.rows.size(); ++k) {
            const std::size_t d = mf.rows[k];
            CHECK_THAT(mf.fitted.value(d) + mf.residuals.value(d), WithinAbs(sim.prices.value(d), 1e-9));
        }
        CHECK(mf.residuals.missing(0));
        CHECK(mf.residuals.missing(6));
    }
}

TEST_CASE("variance model", "[additive][variance-model]") {
    SECTION("intervention ramp") {
        CHECK(intervention_ramp(10, 20) == 0.0);
        CHECK(intervention_ramp(20, 20) == 0.0);
        CHECK(intervention_ramp(21, 20) == 1.0);
        CHECK(intervention_ramp(30, 20) == 10.0);
    }

    const SimSpec spec = iid_spec(1);
    const auto sim = simulate(spec);
    const std::size_t t0 = spec.t0_index;

    SECTION("homoscedastic noise: the intervention term stays small") {
        std::vector<double> ratios;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto e = oracle::normal_draws(spec.n_days, 500 + seed, 5.0);
            const DailySeries eps(spec.start, e);
            const auto vf = fit_npvar_model(eps, sim.calendar, sim.res, t0, true);
            const auto& h1 = vf.fit.term("intervention").contribution;
            double m = 0.0;
            for (double v : h1) m = std::max(m, std::abs(v));
            ratios.push_back(m / sample_variance(e));
        }
        CHECK(median(ratios) <= 0.10);
    }
    SECTION("a logistic variance shift of height 10 is recovered by h1") {
        std::vector<double> shift;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SimSpec s = spec;
            s.seed = seed;
            s.garch = {34.7, 0.0, 0.0, 10.0, 101.2, 0.012, t0, LogisticTime::SinceActivation};
            const auto shifted = simulate(s);
            const DailySeries eps(spec.start, shifted.eps);
            const auto vf = fit_npvar_model(eps, shifted.calendar, shifted.res, t0, true);
            REQUIRE(vf.includes_intervention);
            const auto& curve = vf.intervention;
            double pre = 0.0;
            std::size_t npre = 0;
            for (std::size_t d = 0; d <= t0; ++d) {
                if (curve.missing(d)) continue;
                pre += curve.value(d);
                ++npre;
            }
            shift.push_back(curve.value(curve.size() - 1) - pre / double(npre));
        }
        const double m = median(shift);
        CHECK(m >= 5.0);
        CHECK(m <= 15.0);
    }
    SECTION("all-zero residuals give a degenerate fit floored at 1e-6") {
        const DailySeries eps(spec.start, std::vector<double>(spec.n_days, 0.0));
        const auto vf = fit_npvar_model(eps, sim.calendar, sim.res, t0, true);
        CHECK(vf.fit.rss == 0.0);
        for (std::size_t d : vf.rows) CHECK(vf.sigma2.value(d) == 1e-6);
    }
    SECTION("reduced model omits the intervention and is nested") {
        const auto e = oracle::normal_draws(spec.n_days, 3, 5.0);
        const DailySeries eps(spec.start, e);
        const auto full = fit_npvar_model(eps, sim.calendar, sim.res, t0, true);
        const auto reduced = fit_npvar_model(eps, sim.calendar, sim.res, t0, false);
        CHECK(reduced.fit.find("intervention") == nullptr);
        CHECK(full.rows == reduced.rows);
        CHECK(full.rows.front() == 15);
        for (std::size_t d = 0; d < reduced.intervention.size(); ++d) {
            CHECK((reduced.intervention.missing(d) || reduced.intervention.value(d) == 0.0));
        }
        CHECK(full.fit.rss <= reduced.fit.rss * (1.0 + 1e-8));
        const auto r = anova_nested(full.fit, reduced.fit, full.fit.n());
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
}
