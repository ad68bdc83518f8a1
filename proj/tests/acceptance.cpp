// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "robinbd/robinbd.hpp"

using namespace robinbd;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, double seconds)
{
    std::printf("%s [%2d] %-34s %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(),
                seconds);
    std::fflush(stdout);
    if (!ok) {
        ++g_failures;
    }
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

/// Runs `body`, which returns pass/fail and fills `detail`; exceptions fail the criterion.
void criterion(int id, const char* name, const std::function<bool(std::string&)>& body)
{
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(id, name, ok, detail, secs);
}

unsigned worker_count()
{
    return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

/// Apply `fn` to indices [0, count) on a few threads; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
{
    const unsigned threads = worker_count();
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < count; i += threads) {
                        fn(i);
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

struct BallCell {
    SpaceForm space;
    RobinParams params;
};

/// kappa in {-1, 0, 1}, n in {2, 3}, p in {1.5, 2, 3, 4}, beta in {0.1, 1, 10}.
std::vector<BallCell> ball_cells()
{
    std::vector<BallCell> cells;
    for (const int kappa : {-1, 0, 1}) {
        for (const int n : {2, 3}) {
            for (const double p : {1.5, 2.0, 3.0, 4.0}) {
                for (const double beta : {0.1, 1.0, 10.0}) {
                    cells.push_back({SpaceForm::model(kappa, n), {p, beta}});
                }
            }
        }
    }
    return cells;
}

/// Solutions for every ball cell on Ball(1), solved once and shared.
const std::vector<RadialEigenSolution>& ball_solutions()
{
    static const std::vector<RadialEigenSolution> sols = [] {
        const auto cells = ball_cells();
        std::vector<std::optional<RadialEigenSolution>> tmp(cells.size());
        parallel_for(cells.size(), [&](std::size_t i) {
            tmp[i] = first_eigenvalue(cells[i].space, cells[i].params, RadialDomain::ball(1.0));
        });
        std::vector<RadialEigenSolution> out;
        for (auto& s : tmp) {
            out.push_back(std::move(*s));
        }
        return out;
    }();
    return sols;
}

const std::vector<RadialEigenSolution>& annulus_solutions()
{
    static const std::vector<RadialEigenSolution> sols = [] {
        const auto cells = sweep_cells(SweepGrid::standard());
        std::vector<std::optional<RadialEigenSolution>> tmp(cells.size());
        parallel_for(cells.size(), [&](std::size_t i) {
            tmp[i] = first_eigenvalue(cells[i].space, cells[i].params, cells[i].domain);
        });
        std::vector<RadialEigenSolution> out;
        for (auto& s : tmp) {
            out.push_back(std::move(*s));
        }
        return out;
    }();
    return sols;
}

const SweepReport& standard_sweep()
{
    static const SweepReport report = sweep(SweepGrid::standard(), {}, worker_count());
    return report;
}

} // namespace

int main()
{
    criterion(1, "Bessel disk", [](std::string& d) {
        const double mu = oracle::disk_robin_mu(1.0);
        const double lambda =
            first_eigenvalue(SpaceForm::euclidean(2), {2.0, 1.0}, RadialDomain::ball(1.0)).lambda;
        const double rel = std::fabs(lambda - mu * mu) / (mu * mu);
        d = fmt("lambda=%.12g rel_err=%.2e", lambda, rel);
        return rel <= 1e-6;
    });

    criterion(2, "Dirichlet limit", [](std::string& d) {
        const double j = oracle::bessel_j0_first_zero();
        const double lambda =
            first_eigenvalue(SpaceForm::euclidean(2), {2.0, 1e6}, RadialDomain::ball(1.0)).lambda;
        const double rel = std::fabs(lambda - j * j) / (j * j);
        d = fmt("lambda=%.10g rel_err=%.2e", lambda, rel);
        return rel <= 1e-2;
    });

    criterion(3, "small-beta asymptotic", [](std::string& d) {
        SweepGrid grid = SweepGrid::standard();
        grid.betas = {1e-3};
        const auto cells = sweep_cells(grid);
        std::vector<double> ratio(cells.size(), INFINITY);
        parallel_for(cells.size(), [&](std::size_t i) {
            const auto& c = cells[i];
            const double lambda = first_eigenvalue(c.space, c.params, c.domain).lambda;
            const double ref = c.params.beta * c.domain.boundary_area(c.space) / c.domain.volume(c.space);
            ratio[i] = std::fabs(lambda - ref) / lambda;
        });
        const double worst = *std::max_element(ratio.begin(), ratio.end());
        d = fmt("cells=%.0f worst |lambda-ref|/lambda=%.3e", static_cast<double>(cells.size()), worst);
        return worst <= 0.05;
    });

    criterion(4, "log-gradient monotone, f(R)", [](std::string& d) {
        const auto& sols = ball_solutions();
        int bad_monotone = 0;
        double worst_edge = 0.0;
        double worst_excess = -INFINITY;
        for (const auto& sol : sols) {
            const double edge = sol.params().boundary_log_gradient();
            for (std::size_t k = 1; k < sol.f.size(); ++k) {
                if (!(sol.f[k] > sol.f[k - 1])) {
                    ++bad_monotone;
                    break;
                }
            }
            worst_edge = std::max(worst_edge, std::fabs(sol.f.back() - edge));
            worst_excess = std::max(worst_excess, *std::max_element(sol.f.begin(), sol.f.end()) - edge);
        }
        d = "cells=" + std::to_string(sols.size()) + " non_monotone=" + std::to_string(bad_monotone) +
            fmt(" max|f(R)-edge|=%.2e max(f)-edge=%.2e", worst_edge, worst_excess);
        return sols.size() == 72 && bad_monotone == 0 && worst_edge <= 1e-8 && worst_excess <= 1e-9;
    });

    criterion(5, "H(t, f) = lambda", [](std::string& d) {
        std::vector<double> levels;
        for (int k = 1; k <= 99; ++k) {
            levels.push_back(0.01 * k);
        }
        double worst = 0.0;
        for (const auto& sol : ball_solutions()) {
            worst = std::max(worst, verify_log_gradient_identity(sol, levels) / sol.lambda);
        }
        d = fmt("max_t |H-lambda|/lambda=%.2e", worst);
        return worst <= 1e-5;
    });

    criterion(6, "some level with H <= lambda", [](std::string& d) {
        std::vector<const RadialEigenSolution*> sols;
        for (const auto& s : ball_solutions()) {
            sols.push_back(&s);
        }
        for (const auto& s : annulus_solutions()) {
            sols.push_back(&s);
        }
        double worst = -INFINITY;
        int checks = 0;
        for (const RadialEigenSolution* sp : sols) {
            const RadialEigenSolution& sol = *sp;
            const auto levels = range_level_grid(sol);
            const double edge = sol.params().boundary_log_gradient();
            const auto check = [&](auto phi) {
                const HMinimum res = search_h_minimum(sol, phi, levels);
                worst = std::max(worst, res.h_min / sol.lambda - 1.0);
                ++checks;
            };
            check([&](double r) { return 0.5 * sol.f_at(r); });
            check([&](double r) { return 1.2 * sol.f_at(r); });
            check([&](double r) { return sol.f_at(r) + 0.1; });
            check([edge](double) { return edge; });
            check([&](double r) { return std::min(sol.f_at(r), 0.5 * edge); });
        }
        d = "checks=" + std::to_string(checks) + fmt(" max(min_t H/lambda - 1)=%.3e", worst);
        return worst <= 1e-6;
    });

    criterion(7, "transplant equimeasurability, L^q", [](std::string& d) {
        struct Case {
            int kappa;
            double p;
        };
        const std::vector<Case> cases{{-1, 3.0}, {0, 3.0}, {1, 3.0}, {-1, 1.5}, {0, 1.5}, {1, 1.5}};
        std::vector<double> worst_measure(cases.size(), 0.0);
        std::vector<double> worst_norm(cases.size(), 0.0);
        parallel_for(cases.size(), [&](std::size_t c) {
            const SpaceForm sf = SpaceForm::model(cases[c].kappa, 3);
            const RobinParams params{cases[c].p, 1.0};
            const auto sol = first_eigenvalue(sf, params, RadialDomain::annulus(0.5, 1.0));
            const double rs = sharp_radius(sf, RadialDomain::annulus(0.5, 1.0), 1.0);
            // psi: the log-gradient of the comparison ball's own eigenfunction.
            const auto ball = first_eigenvalue(sf, params, RadialDomain::ball(rs));
            const Transplant tr(sol, sf, [&ball](double s) { return ball.f_at(s); });
            const double top = params.boundary_log_gradient();
            for (int i = 0; i < 20; ++i) {
                const double t = (i + 0.5) / 20.0;
                const double ut = tr.superlevel_volume(t);
                for (int j = 0; j < 20; ++j) {
                    const double l = (j + 0.5) / 20.0 * top;
                    const VolumePair m = tr.check_equimeasurable(t, l);
                    worst_measure[c] = std::max(worst_measure[c], std::fabs(m.lhs - m.rhs) / ut);
                }
                for (const double q : {params.p - 1.0, params.p}) {
                    const NormIdentity id = tr.lp_norm_identity(t, q);
                    const double scale = std::max(id.rhs, 1e-300);
                    worst_norm[c] = std::max({worst_norm[c], std::fabs(id.lhs - id.rhs) / scale,
                                              std::fabs(id.lhs_layer_cake - id.rhs) / scale,
                                              std::fabs(id.rhs_layer_cake - id.rhs) / scale});
                }
            }
        });
        const double wm = *std::max_element(worst_measure.begin(), worst_measure.end());
        const double wn = *std::max_element(worst_norm.begin(), worst_norm.end());
        d = fmt("max measure rel err=%.2e max norm rel err=%.2e", wm, wn);
        return wm <= 1e-6 && wn <= 1e-6;
    });

    criterion(8, "ball minimises lambda (sweep)", [](std::string& d) {
        const SweepReport& rep = standard_sweep();
        int errors = 0;
        double worst = INFINITY;
        for (const auto& rec : rep.records) {
            if (!rec.error.empty()) {
                ++errors;
                continue;
            }
            worst = std::min(worst, rec.gap / rec.lambda_ball);
        }
        d = "cells=" + std::to_string(rep.records.size()) + " errors=" + std::to_string(errors) +
            fmt(" min gap/lambda_ball=%.4e", worst);
        // Every standard cell has R2/R1 >= 2, so the strict bound applies throughout.
        return rep.records.size() == 108 && errors == 0 && worst >= 1e-3;
    });

    criterion(9, "isoperimetric gap", [](std::string& d) {
        const SweepReport& rep = standard_sweep();
        double worst = INFINITY;
        for (const auto& rec : rep.records) {
            worst = std::min(worst, rec.isoperimetric_gap);
        }
        double ball_worst = 0.0;
        for (const int kappa : {-1, 0, 1}) {
            for (const int n : {2, 3}) {
                const SpaceForm sf = SpaceForm::model(kappa, n);
                for (const double r : {0.5, 1.0, 1.5}) {
                    const PerimeterPair pp = isoperimetric_check(sf, RadialDomain::ball(r), 1.0);
                    ball_worst = std::max(ball_worst, std::fabs(pp.perimeter - pp.sharp_perimeter));
                }
            }
        }
        d = fmt("min annulus gap=%.4e max |ball gap|=%.2e", worst, ball_worst);
        return worst >= -1e-10 && ball_worst <= 1e-10;
    });

    criterion(10, "scaling identity", [](std::string& d) {
        double worst = 0.0;
        for (const auto [p, beta] : {std::pair{1.5, 1.0}, std::pair{3.0, 2.0}}) {
            for (const int n : {2, 3}) {
                const SpaceForm sf = SpaceForm::euclidean(n);
                const double base = first_eigenvalue(sf, {p, beta}, RadialDomain::ball(1.0)).lambda;
                for (const double s : {0.5, 2.0}) {
                    const double scaled =
                        first_eigenvalue(sf, {p, std::pow(s, 1.0 - p) * beta}, RadialDomain::ball(s))
                            .lambda;
                    const double ref = std::pow(s, -p) * base;
                    worst = std::max(worst, std::fabs(scaled - ref) / ref);
                }
            }
        }
        d = fmt("max rel err=%.2e", worst);
        return worst <= 1e-7;
    });

    criterion(11, "shooting vs Rayleigh oracle", [](std::string& d) {
        std::vector<const RadialEigenSolution*> sols;
        for (const auto& s : ball_solutions()) {
            sols.push_back(&s);
        }
        for (const auto& s : annulus_solutions()) {
            sols.push_back(&s);
        }
        std::vector<double> rel(sols.size(), INFINITY);
        parallel_for(sols.size(), [&](std::size_t i) {
            const RadialEigenSolution& sol = *sols[i];
            const double est = minimize(sol.space(), sol.params(), sol.domain()).lambda_est;
            rel[i] = std::fabs(est - sol.lambda) / sol.lambda;
        });
        const double worst = *std::max_element(rel.begin(), rel.end());
        d = "cells=" + std::to_string(sols.size()) + fmt(" max rel diff=%.2e", worst);
        return worst <= 1e-3;
    });

    criterion(12, "model constants", [](std::string& d) {
        bool ok = true;
        for (int n = 2; n <= 8; ++n) {
            ok = ok && solve_R_kappa(1, n) == 1.0;
        }
        double worst_c = 0.0;
        for (const int n : {2, 3}) {
            for (const double dd : {0.5, 1.0, 2.0}) {
                const double c = 1.0 / solve_R_kappa(-1, n, dd);
                const double wn = oracle::simpson(
                    [n](double t) { return std::pow(std::sin(t), n - 1); }, 0.0, oracle::pi);
                const double lhs = c * oracle::simpson(
                                           [&](double t) {
                                               return std::pow(std::cosh(t) + c * std::sinh(t), n - 1);
                                           },
                                           0.0, dd);
                worst_c = std::max(worst_c, std::fabs(lhs - wn));
            }
        }
        for (const double avr : {0.1, 0.5, 1.0}) {
            for (const int n : {2, 3, 5}) {
                ok = ok && theta_mn(avr, n, 1) == avr && theta_mn(avr, n, 2) == avr;
            }
        }
        double worst_w = 0.0;
        for (int n = 1; n <= 12; ++n) {
            const double ref = oracle::simpson(
                [n](double t) { return std::pow(std::sin(t), n - 1); }, 0.0, oracle::pi);
            worst_w = std::max(worst_w, std::fabs(wallis(n) - ref));
        }
        d = fmt("C(d) residual=%.2e wallis err=%.2e", worst_c, worst_w) +
            (ok ? " exact identities ok" : " exact identity broken");
        return ok && worst_c < 1e-10 && worst_w <= 1e-12;
    });

    criterion(13, "rectangles beat the disk", [](std::string& d) {
        double min_gap = INFINITY;
        double worst_1d = 0.0;
        for (const double beta : {0.1, 1.0, 10.0}) {
            for (const auto [lx, ly] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{5.0, 1.0}}) {
                const ComparisonRecord rec = rectangle_check({2.0, beta}, lx, ly);
                min_gap = std::min(min_gap, rec.gap);
                for (const double len : {lx, ly}) {
                    const double mu = oracle::interval_robin_mu(len, beta);
                    worst_1d = std::max(worst_1d,
                                        std::fabs(robin_interval_eigenvalue(len, beta) - mu * mu) / (mu * mu));
                }
            }
        }
        d = fmt("min gap=%.4e max 1D rel err=%.2e", min_gap, worst_1d);
        return min_gap > 0.0 && worst_1d <= 1e-8;
    });

    std::printf("%s: %d criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
    return g_failures ? 1 : 0;
}
