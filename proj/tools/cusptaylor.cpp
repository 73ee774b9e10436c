// Command-line front end: exact CM-point Fourier coefficient machinery for
// Ramanujan's Delta, periodicity certificates mod l, E_m zero location, and
// numeric checks of the Poincare-series average identities.
#include <complex>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cusptaylor/acceptance.hpp"
#include "cusptaylor/coefficients.hpp"
#include "cusptaylor/periodicity.hpp"
#include "cusptaylor/poincare.hpp"
#include "cusptaylor/zerofinder.hpp"

using json = nlohmann::ordered_json;
using namespace cusptaylor;

namespace {

json quad_json(const QuadElt &x) { return json::array({x.a.get_str(), x.b.get_str()}); }

json residue_json(const ResidueElt &x) { return json::array({x.a, x.b}); }

json certificate_json(const PeriodCertificate &c, const CMPointSpec &spec) {
    json j;
    j["disc"] = c.D;
    j["prime"] = c.l;
    j["field"] = spec.field.is_rational() ? "Q" : ("Q(sqrt" + std::to_string(spec.field.d) + ")");
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["beta_is_least"] = c.beta_is_least;
    j["constant_period"] = c.constant_period;
    if (c.shortcut) {
        j["shortcut"] = {{"i0", c.shortcut->i0},
                         {"j0", c.shortcut->j0},
                         {"unit", residue_json(c.shortcut->unit)},
                         {"order", c.shortcut->order}};
    } else {
        j["shortcut"] = nullptr;
    }
    j["verdict"] = verdict_name(c.verdict);
    if (c.verdict == Verdict::HAS_ZERO) j["zero_at"] = c.zero_at;
    if (c.zero_from >= 0) j["zero_from"] = c.zero_from;
    j["checked_upto"] = c.checked_upto;
    j["wall_time_ms"] = c.wall_ms;
    return j;
}

json config_json(const std::string &cmd, unsigned seed, int threads) {
    json j;
    j["command"] = cmd;
    j["seed"] = seed;
    j["threads"] = threads;
    return j;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Taylor/Fourier coefficients of Delta at CM points: exact recursions, "
                 "mod-l certificates, zero location, Poincare-series checks"};
    app.require_subcommand(1);
    int threads = 0;
    unsigned seed = 20240817;
    bool no_timings = false;
    app.add_option("--threads", threads, "worker threads (0 = hardware)");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_flag("--no-timings", no_timings,
                 "zero out wall-time fields (byte-identical reruns)");

    // table
    auto *cmd_table = app.add_subcommand("table", "dump the CM registry as JSON");

    // coeff
    auto *cmd_coeff = app.add_subcommand("coeff", "Fourier coefficient c_z(Delta, m)");
    double cx = 0, cy = 1;
    int cm = 0;
    std::string route = "all";
    int cdisc = 0;
    cmd_coeff->add_option("--x", cx, "Re z");
    cmd_coeff->add_option("--y", cy, "Im z")->check(CLI::PositiveNumber);
    cmd_coeff->add_option("--m", cm, "coefficient order")->check(CLI::Range(0, kMaxCoeffOrder));
    cmd_coeff->add_option("--route", route, "all|theorem|derivative|cm");
    cmd_coeff->add_option("--disc", cdisc, "discriminant for the cm route");

    // certify
    auto *cmd_certify = app.add_subcommand("certify", "non-vanishing certificate mod l");
    int disc = -7;
    std::int64_t prime = 23;
    std::string expect;
    std::int64_t max_steps = 100000000;
    cmd_certify->add_option("--disc", disc, "discriminant")->required();
    cmd_certify->add_option("--prime", prime, "odd prime l")->required();
    cmd_certify->add_option("--expect", expect, "nonzero|zero (exit 1 when violated)");
    cmd_certify->add_option("--max-steps", max_steps, "recursion step budget");

    // period
    auto *cmd_period = app.add_subcommand("period", "periods and the Psi-orbit relations");
    int pdisc = -4;
    std::int64_t pprime = 5;
    cmd_period->add_option("--disc", pdisc)->required();
    cmd_period->add_option("--prime", pprime)->required();

    // scan-residue
    auto *cmd_scan = app.add_subcommand("scan-residue", "tends-to-zero vs quadratic residue");
    int sdisc = -4;
    std::int64_t lmax = 100;
    cmd_scan->add_option("--disc", sdisc)->required();
    cmd_scan->add_option("--lmax", lmax, "scan primes 3 < l < lmax");

    // zeros
    auto *cmd_zeros = app.add_subcommand("zeros", "zeros of E_m in the fundamental domain");
    int zm = 2;
    double ztol = 1e-6;
    std::string emit = "json";
    cmd_zeros->add_option("--m", zm)->check(CLI::Range(1, 16));
    cmd_zeros->add_option("--tol", ztol);
    cmd_zeros->add_option("--emit", emit, "json|csv");

    // avg-check
    auto *cmd_avg = app.add_subcommand("avg-check", "Poincare average identities");
    std::string kind = "parabolic-elliptic";
    double x0 = 0, y0 = 1.2, x1 = 0, y1 = 1.2;
    int am = 0, an = 1;
    long acmax = 0;
    cmd_avg->add_option("--kind", kind, "parabolic-elliptic|elliptic-elliptic");
    cmd_avg->add_option("--x0", x0);
    cmd_avg->add_option("--y0", y0)->check(CLI::PositiveNumber);
    cmd_avg->add_option("--x1", x1);
    cmd_avg->add_option("--y1", y1)->check(CLI::PositiveNumber);
    cmd_avg->add_option("--m", am);
    cmd_avg->add_option("--n", an);
    cmd_avg->add_option("--cmax", acmax, "series truncation override");

    // selftest
    auto *cmd_selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    bool quick = false;
    cmd_selftest->add_flag("--quick", quick, "trim the slowest scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_table) {
            json out;
            out["config"] = config_json("table", seed, threads);
            out["rows"] = json::array();
            for (int D : all_discriminants()) {
                const auto &s = registry(D);
                json row;
                row["disc"] = D;
                row["field"] =
                    s.field.is_rational() ? "Q" : ("Q(sqrt" + std::to_string(s.field.d) + ")");
                row["z"] = {s.z().real(), s.z().imag()};
                row["k0"] = s.k0;
                row["k1"] = quad_json(s.k1);
                row["k2"] = quad_json(s.k2);
                row["k3_num"] = quad_json(s.k3_num);
                row["k3_den"] = s.k3_den;
                if (!s.special()) {
                    row["m1"] = quad_json(s.m1);
                    row["m2"] = quad_json(s.m2);
                }
                row["class_number"] = {s.h_num, s.h_den};
                row["elliptic_order"] = s.elliptic_order;
                row["omega"] = chowla_selberg(D);
                out["rows"].push_back(row);
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*cmd_coeff) {
            Cplx z(cx, cy);
            json out;
            out["config"] = config_json("coeff", seed, threads);
            out["m"] = cm;
            out["z"] = {cx, cy};
            json routes;
            std::vector<Cplx> vals;
            if (route == "all" || route == "theorem") {
                Cplx v = coeff_via_theorem41(z, cm);
                routes["theorem"] = {v.real(), v.imag()};
                vals.push_back(v);
            }
            if (route == "all" || route == "derivative") {
                Cplx v = coeff_via_derivatives(z, cm);
                routes["derivative"] = {v.real(), v.imag()};
                vals.push_back(v);
            }
            if (route == "cm" || (route == "all" && cdisc != 0)) {
                const auto &s = registry(cdisc);
                Cplx v = coeff_via_cm_exact(s, cm);
                routes["cm"] = {v.real(), v.imag()};
                vals.push_back(v);
            }
            if (vals.empty()) {
                std::cerr << "unknown route: " << route << "\n";
                return 2;
            }
            out["routes"] = routes;
            out["value"] = {vals.front().real(), vals.front().imag()};
            out["max_rel_disagreement"] = max_rel_disagreement(vals);
            SeriesContext ctx;
            out["series_tail_bound"] = ctx.eisenstein_tail(reduce_to_fundamental(z).z.imag());
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*cmd_certify) {
            const auto &s = registry(disc);
            DetectOptions dopt;
            dopt.max_steps = max_steps;
            PeriodCertificate cert = certify_nonvanishing(s, prime, dopt);
            if (no_timings) cert.wall_ms = 0;
            json out;
            out["config"] = config_json("certify", seed, threads);
            out["certificate"] = certificate_json(cert, s);
            std::cout << out.dump(2) << "\n";
            if (!expect.empty()) {
                bool want_nonzero = expect == "nonzero";
                bool got_nonzero = cert.verdict == Verdict::ALL_NONZERO;
                if (want_nonzero != got_nonzero) return 1;
            }
            return 0;
        }

        if (*cmd_period) {
            const auto &s = registry(pdisc);
            PeriodRelations rel = period_relations_check(s, pprime);
            json out;
            out["config"] = config_json("period", seed, threads);
            out["certificate"] = certificate_json(rel.cert, s);
            out["psi_orbit"] = {{"preperiod", rel.orbit.preperiod}, {"period", rel.orbit.period}};
            if (rel.orbit.scalar)
                out["psi_orbit"]["scalar"] = {{"i0", rel.orbit.scalar->i0},
                                              {"j0", rel.orbit.scalar->j0},
                                              {"unit", residue_json(rel.orbit.scalar->unit)},
                                              {"order", rel.orbit.scalar->order}};
            out["ideal_condition"] = ideal_condition(s, pprime);
            out["hypotheses_met"] = rel.hypotheses_met;
            if (rel.hypotheses_met) {
                out["poly_period_eq_l_times_psi"] = rel.poly_vs_psi_ok;
                out["poly_period_eq_l_times_const"] = rel.poly_vs_const_ok;
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*cmd_scan) {
            const auto &s = registry(sdisc);
            auto rows = residue_criterion_scan(s, lmax, threads);
            // JSON Lines: header, one row per prime, trailing summary
            json head = config_json("scan-residue", seed, threads);
            head["disc"] = sdisc;
            head["lmax"] = lmax;
            std::cout << head.dump() << "\n";
            bool all_match = true;
            for (const auto &r : rows) {
                json row = {{"l", r.l},
                            {"tends_to_zero", r.tends_to_zero},
                            {"kronecker", r.kronecker_D_mod_l},
                            {"matches_theorem", r.matches_theorem},
                            {"matches_class_form", r.matches_class_form}};
                std::cout << row.dump() << "\n";
                all_match = all_match && r.matches_theorem && r.matches_class_form;
            }
            std::cout << json{{"all_match", all_match}}.dump() << "\n";
            return all_match ? 0 : 1;
        }

        if (*cmd_zeros) {
            SeriesContext ctx;
            SearchRegion region;
            region.tolerance = ztol;
            auto zeros = find_zeros(zm, ctx, region);
            if (emit == "csv") {
                std::cout << "m,kind,x,y,residual\n";
                for (const auto &r : zeros) {
                    std::cout << r.m << "," << zero_kind_name(r.kind) << "," << r.location.real()
                              << "," << r.location.imag() << "," << r.residual << "\n";
                    if (r.mirror)
                        std::cout << r.m << "," << zero_kind_name(r.kind) << ","
                                  << r.mirror->real() << "," << r.mirror->imag() << ","
                                  << r.residual << "\n";
                }
            } else {
                // JSON Lines: header, then one record per zero
                json head = config_json("zeros", seed, threads);
                head["m"] = zm;
                head["count"] = zero_count(zeros);
                std::cout << head.dump() << "\n";
                for (const auto &r : zeros) {
                    json rec = {{"m", r.m},
                                {"kind", zero_kind_name(r.kind)},
                                {"x", r.location.real()},
                                {"y", r.location.imag()},
                                {"residual", r.residual},
                                {"confirmed", r.confirmed}};
                    if (r.mirror) rec["mirror"] = {r.mirror->real(), r.mirror->imag()};
                    std::cout << rec.dump() << "\n";
                }
            }
            return 0;
        }

        if (*cmd_avg) {
            TruncationPolicy pol;
            if (acmax > 0) {
                pol.cmax = acmax;
                pol.dmax_factor = acmax;
                pol.entry_max = acmax;
            }
            VerificationReport rep;
            if (kind == "parabolic-elliptic") {
                rep = verify_parabolic_elliptic(Cplx(x0, y0), am, an, pol);
            } else if (kind == "elliptic-elliptic") {
                Cplx z0(x0, y0), z1(cmd_avg->count("--x1") || cmd_avg->count("--y1")
                                        ? Cplx(x1, y1)
                                        : Cplx(x0, y0));
                rep = verify_elliptic_elliptic(z0, z1, am, an, pol);
            } else {
                std::cerr << "unknown kind: " << kind << "\n";
                return 2;
            }
            json out;
            out["config"] = config_json("avg-check", seed, threads);
            out["kind"] = kind;
            out["m"] = am;
            out["n"] = an;
            out["lhs"] = {rep.lhs.real(), rep.lhs.imag()};
            out["rhs"] = {rep.rhs.real(), rep.rhs.imag()};
            out["rel_err"] = rep.rel_err;
            out["tail_bound"] = rep.tail_estimate;
            out["policy"] = {{"cmax", pol.cmax},
                             {"dmax_factor", pol.dmax_factor},
                             {"entry_max", pol.entry_max},
                             {"tmax", pol.tmax}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*cmd_selftest) {
            selfcheck::Options opt;
            opt.seed = seed;
            opt.threads = threads;
            opt.quick = quick;
            if (const char *budget = std::getenv("CUSPTAYLOR_BUDGET_MS"))
                opt.budget_ms = std::atof(budget);
            bool all_ok = true;
            selfcheck::run_all(opt, [&](const selfcheck::CriterionResult &r) {
                if (r.skipped) {
                    std::cout << "SKIP  " << r.name << "\n";
                } else {
                    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  ("
                              << r.seconds << "s)";
                    if (!r.detail.empty()) std::cout << "  -- " << r.detail;
                    std::cout << "\n";
                    all_ok = all_ok && r.passed;
                }
                std::cout.flush();
            });
            return all_ok ? 0 : 1;
        }
    } catch (const BudgetExceeded &e) {
        json err;
        err["error"] = {{"kind", "BUDGET_EXCEEDED"}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception &e) {
        json err;
        err["error"] = {{"kind", "invalid_request"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    return 2;
}
