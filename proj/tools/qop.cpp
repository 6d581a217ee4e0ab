// Command-line front end: exact Q polynomials, numeric Bethe roots, and the
// functional-identity battery for odd-site XXZ chains at the combinatorial
// anisotropy point.
//
// Exit codes: 0 success, 1 a verification check failed, 2 invalid usage,
// 3 internal invariant violation.

#include <atomic>
#include <complex>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qop/bethe.hpp"
#include "qop/errors.hpp"
#include "qop/functional.hpp"
#include "qop/poly.hpp"
#include "qop/qsolver.hpp"
#include "qop/serialize.hpp"

namespace {

using qop::json;

unsigned thread_budget() {
    if (const char* env = std::getenv("QOP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Run fn(0..count-1) on up to QOP_THREADS workers; results must be written to
// pre-sized slots so assembly order stays deterministic.  The first exception
// wins and is rethrown on the caller's thread.
template <typename F>
void parallel_for_index(std::size_t count, F&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(thread_budget(), count ? count : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t wkr = 0; wkr < workers; ++wkr) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<qop::ChainParams> requested_sectors(int L, int N, std::optional<int> p) {
    if (p) return {qop::ChainParams(L, N, *p)};
    return qop::all_sectors(L, N);
}

// Rational-coefficient pretty printer, e.g. "z^4 + 3 z^3 + 11/3 z^2 + 3 z + 1".
std::string plain_poly(const qop::QPolynomial& Q) {
    std::ostringstream out;
    const int p = Q.params.p;
    bool first = true;
    for (int k = p; k >= 0; --k) {
        mpq_class c = Q.elementary[static_cast<std::size_t>(p - k)];
        if ((p - k) % 2) c = -c;
        if (c == 0) continue;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        const mpq_class mag = abs(c);
        if (mag != 1 || k == 0) out << mag.get_str();
        if (k > 0) {
            if (mag != 1) out << " ";
            out << "z";
            if (k > 1) out << "^" << k;
        }
    }
    if (first) out << "0";
    return out.str();
}

// ---------------------------------------------------------------- solve ----

int run_solve(int L, int N, std::optional<int> p, const std::string& method,
              const std::string& output) {
    const auto sectors = requested_sectors(L, N, p);
    struct Row {
        json j;
        std::string rendered;  // latex/plain text when requested
        bool agree = true;
    };
    std::vector<Row> rows(sectors.size());

    parallel_for_index(sectors.size(), [&](std::size_t i) {
        const qop::ChainParams& cp = sectors[i];
        std::optional<qop::QPolynomial> linear, closed;
        if (method != "closed") linear = qop::solve_q_linear(qop::build_linear_system(cp));
        if (method != "linear") closed = qop::closed_form_q(cp).q;
        const qop::QPolynomial& rep = linear ? *linear : *closed;

        Row row;
        row.j = qop::json_of(rep);
        row.j["method"] = method;
        if (linear && closed) {
            row.agree = linear->elementary == closed->elementary;
            row.j["methods_agree"] = row.agree;
            if (!row.agree) row.j["closed_elementary"] = qop::json_of(*closed)["elementary"];
        }
        if (output == "latex")
            row.rendered = qop::latex(rep.poly);
        else if (output == "plain")
            row.rendered = plain_poly(rep);
        rows[i] = std::move(row);
    });

    bool all_agree = true;
    for (const auto& row : rows) all_agree = all_agree && row.agree;

    if (output == "json") {
        json doc{{"schema", 1}, {"command", "solve"}, {"results", json::array()}};
        for (auto& row : rows) doc["results"].push_back(std::move(row.j));
        if (method == "both") doc["methods_agree"] = all_agree;
        std::cout << doc.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::cout << "p=" << sectors[i].p << ": " << rows[i].rendered << "\n";
    }
    std::cerr << "solved " << sectors.size() << " sector(s) for L=" << L << " N=" << N
              << (method == "both"
                      ? (all_agree ? "; both methods agree" : "; METHODS DISAGREE")
                      : "")
              << "\n";
    return all_agree ? 0 : 1;
}

// ---------------------------------------------------------------- verify ---

struct CheckSet {
    bool tq = false, bae = false, functional = false, plucker = false, fusion = false,
         decompose = false;

    bool wants_family() const { return functional || plucker || fusion || decompose; }
};

CheckSet parse_checks(const std::string& list) {
    CheckSet set;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "tq") set.tq = true;
        else if (item == "bae") set.bae = true;
        else if (item == "functional") set.functional = true;
        else if (item == "plucker") set.plucker = true;
        else if (item == "fusion") set.fusion = true;
        else if (item == "decompose") set.decompose = true;
        else if (item == "all")
            set = CheckSet{true, true, true, true, true, true};
        else
            throw CLI::ValidationError("--checks", "unknown check '" + item + "'");
    }
    return set;
}

int run_verify(int L, int N, std::optional<int> p, const CheckSet& checks) {
    const auto sectors = requested_sectors(L, N, p);
    const bool sweep = !p.has_value();
    struct Row {
        json j;
        bool failed = false;
        std::string note;
    };
    std::vector<Row> rows(sectors.size());

    parallel_for_index(sectors.size(), [&](std::size_t i) {
        const qop::ChainParams& cp = sectors[i];
        Row row;
        row.j = json{{"L", cp.L}, {"N", cp.N}, {"p", cp.p}, {"checks", json::array()}};
        auto push = [&](json entry) { row.j["checks"].push_back(std::move(entry)); };
        auto push_residual = [&](const std::string& name, const qop::FieldPoly& r) {
            const bool zero = r.is_zero();
            push(json{{"name", name},
                      {"status", zero ? "zero" : "nonzero"},
                      {"residual_degree", r.degree()}});
            row.failed = row.failed || !zero;
        };

        const qop::QPolynomial Q = qop::solve_q_linear(qop::build_linear_system(cp));

        if (checks.tq) push_residual("tq", qop::tq_residual(Q));

        if (checks.bae) {
            try {
                const qop::BetheRoots roots = qop::find_roots(Q);
                const qop::BaeReport rep = qop::bae_residual(roots);
                const bool ok = rep.max_residual < 1e-9;
                push(json{{"name", "bae"},
                          {"status", ok ? "pass" : "fail"},
                          {"max_residual", rep.max_residual},
                          {"backward_error", roots.backward_error}});
                row.failed = row.failed || !ok;
            } catch (const qop::check_failure& e) {
                push(json{{"name", "bae"}, {"status", "fail"}, {"error", e.what()}});
                row.failed = true;
            }
        }

        if (checks.wants_family()) {
            // The functional identities live on the positive-spin sector; the
            // mirror sector carries the same pair, so a sweep skips it and an
            // explicit request is redirected.
            std::optional<qop::ChainParams> family_sector;
            if (cp.sz_twice() > 0) {
                family_sector = cp;
            } else if (sweep) {
                push(json{{"name", "family"},
                          {"status", "skipped"},
                          {"note", "pair checks run on the mirror sector p=" +
                                       std::to_string(cp.sites() * cp.L - cp.p)}});
            } else {
                family_sector = qop::ChainParams(cp.L, cp.N, cp.sites() * cp.L - cp.p);
                row.note = "pair checks canonicalized to the mirror sector p=" +
                           std::to_string(family_sector->p);
                row.j["family_sector_p"] = family_sector->p;
            }

            if (family_sector) {
                const qop::QPolynomial base =
                    *family_sector == cp
                        ? Q
                        : qop::solve_q_linear(qop::build_linear_system(*family_sector));
                const qop::QPPair pair = qop::wrong_side_p(base);

                if (checks.functional) {
                    try {
                        for (const auto& res : qop::verify_fundamental(pair).results)
                            push(qop::json_of(res));
                    } catch (const qop::identity_violation& e) {
                        push(json{{"name", e.identity},
                                  {"status", "nonzero"},
                                  {"error", e.what()}});
                        row.failed = true;
                    }
                }
                if (checks.plucker || checks.fusion) {
                    qop::WronskianFamily family(pair);
                    if (checks.plucker) {
                        using qop::HalfInt;
                        const HalfInt trips[][3] = {
                            {HalfInt{1}, HalfInt{0}, HalfInt{2}},
                            {HalfInt{2}, HalfInt{0}, HalfInt{4}},
                            {HalfInt{0}, HalfInt{-2}, HalfInt{0}},
                        };
                        for (const auto& t : trips)
                            push_residual("plucker(" + t[0].str() + "," + t[1].str() +
                                              "," + t[2].str() + ")",
                                          qop::plucker_residual(family, t[0], t[1], t[2]));
                    }
                    if (checks.fusion) {
                        push_residual("t0_closed_form",
                                      family.t(qop::HalfInt{0}) - family.t0_closed_form());
                        push_residual("t_half_closed_form",
                                      family.t(qop::HalfInt{1}) -
                                          family.t_half_closed_form());
                        for (int twice = -2; twice <= 2; ++twice)
                            push_residual(
                                "fusion(" + qop::HalfInt{twice}.str() + ")",
                                qop::fusion_residual(family, qop::HalfInt{twice}));
                    }
                }
                if (checks.decompose) {
                    try {
                        const qop::PQDecomposition dec = qop::pq_decompose(pair);
                        push(json{{"name", "pq_decomposition"},
                                  {"status", "zero"},
                                  {"polynomial_part_degree", dec.F.degree()},
                                  {"remainder_degree", dec.C.degree()}});
                    } catch (const qop::identity_violation& e) {
                        push(json{{"name", e.identity},
                                  {"status", "nonzero"},
                                  {"error", e.what()}});
                        row.failed = true;
                    }
                }
            }
        }
        rows[i] = std::move(row);
    });

    bool any_failed = false;
    json doc{{"schema", 1}, {"command", "verify"}, {"sectors", json::array()}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        any_failed = any_failed || rows[i].failed;
        doc["sectors"].push_back(std::move(rows[i].j));
        std::cerr << "L=" << sectors[i].L << " N=" << sectors[i].N
                  << " p=" << sectors[i].p << ": "
                  << (rows[i].failed ? "CHECK FAILED" : "ok");
        if (!rows[i].note.empty()) std::cerr << " (" << rows[i].note << ")";
        std::cerr << "\n";
    }
    doc["all_passed"] = !any_failed;
    std::cout << doc.dump(2) << "\n";
    return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------- roots ----

int run_roots(int L, int N, std::optional<int> p, const std::string& format,
              std::uint64_t seed) {
    const auto sectors = requested_sectors(L, N, p);
    struct Row {
        qop::BetheRoots roots;
        qop::BaeReport bae;
    };
    std::vector<std::optional<Row>> rows(sectors.size());

    parallel_for_index(sectors.size(), [&](std::size_t i) {
        const qop::QPolynomial Q =
            qop::solve_q_linear(qop::build_linear_system(sectors[i]));
        qop::BetheRoots roots = qop::find_roots(Q, seed);
        qop::BaeReport bae = qop::bae_residual(roots);
        rows[i] = Row{std::move(roots), std::move(bae)};
    });

    double worst_backward = 0.0, worst_bae = 0.0;
    for (const auto& row : rows) {
        worst_backward = std::max(worst_backward, row->roots.backward_error);
        worst_bae = std::max(worst_bae, row->bae.max_residual);
    }

    if (format == "json") {
        json doc{{"schema", 1}, {"command", "roots"}, {"results", json::array()}};
        for (const auto& row : rows)
            doc["results"].push_back(qop::json_of(row->roots, &row->bae));
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << qop::roots_csv_header() << "\n";
        for (const auto& row : rows) std::cout << qop::roots_csv_rows(row->roots, row->bae);
    }
    std::cerr << "roots for " << sectors.size() << " sector(s); max backward error "
              << worst_backward << ", max BAE residual " << worst_bae << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact Baxter Q polynomials for odd-length spin-L/2 XXZ chains at the "
        "supersymmetric anisotropy, with numeric Bethe roots and exact "
        "functional-identity verification"};
    app.require_subcommand(1);

    int L = 0, N = 0;
    int p_value = 0;
    std::string method = "both", output = "json", format = "csv", checks = "all";
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--L", L, "twice the spin (odd positive)")->required();
        cmd->add_option("--N", N, "chain has M = 2N+1 sites")->required();
        cmd->add_option("--p", p_value,
                        "Bethe-root count; omit to sweep the whole window "
                        "[N*L, (N+1)*L]");
    };

    CLI::App* solve = app.add_subcommand("solve", "compute Q exactly");
    add_common(solve);
    solve->add_option("--method", method, "linear | closed | both")
        ->check(CLI::IsMember({"linear", "closed", "both"}));
    solve->add_option("--output", output, "json | latex | plain")
        ->check(CLI::IsMember({"json", "latex", "plain"}));

    CLI::App* verify = app.add_subcommand("verify", "run exact identity checks");
    add_common(verify);
    verify->add_option(
        "--checks", checks,
        "comma list of tq,bae,functional,plucker,fusion,decompose (default all)");

    CLI::App* roots = app.add_subcommand("roots", "numeric Bethe roots of Q");
    add_common(roots);
    roots->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    roots->add_option("--seed", seed, "perturbation seed for the root iteration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::optional<int> p;
        for (CLI::App* cmd : {solve, verify, roots})
            if (cmd->parsed() && cmd->count("--p")) p = p_value;
        if (solve->parsed()) return run_solve(L, N, p, method, output);
        if (verify->parsed()) return run_verify(L, N, p, parse_checks(checks));
        return run_roots(L, N, p, format, seed);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const qop::check_failure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const qop::error& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 3;
    }
}
