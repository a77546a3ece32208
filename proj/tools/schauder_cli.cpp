// Command-line front end: matrix generators, basis constants, selection
// runs and the harmonic demo. Reports are JSON (default) or CSV.
//
// Exit status: 0 success, 1 usage or IO error, 2 validation failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "schauder/json_io.hpp"
#include "schauder/schauder.hpp"

namespace {

using namespace schauder;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

/// Raised for plan or hypothesis violations; maps to exit status 2.
class ValidationFailure : public Error {
public:
    using Error::Error;
};

struct Output {
    std::string report_path;
    bool csv = false;
    bool json = false; // accepted for symmetry; JSON is the default
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
}

void emit_json(const Json& j, const Output& o) { emit(j.dump(2) + "\n", o.report_path); }

class Csv {
public:
    explicit Csv(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << '\n';
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    std::ostringstream out_;
};

void write_matrix_to(const DenseMatrix& m, const std::string& path, const std::string& comment = {}) {
    if (path.empty() || path == "-") {
        write_matrix(std::cout, m, comment);
    } else {
        save_matrix(path, m, comment);
    }
}

BasisPair load_pair(const std::string& f_path, const std::string& g_path) {
    const DenseMatrix f = load_matrix(f_path);
    if (g_path.empty()) {
        return biorthogonal_inverse(f);
    }
    return BasisPair(f, load_matrix(g_path));
}

std::vector<std::size_t> to_zero_based(const std::vector<std::size_t>& one_based_idx, const char* what) {
    std::vector<std::size_t> out;
    for (auto i : one_based_idx) {
        if (i == 0) {
            throw InvalidParameter(std::string(what) + ": indices are 1-based");
        }
        out.push_back(i - 1);
    }
    return out;
}

void add_output(CLI::App* cmd, Output& o, bool with_csv) {
    cmd->add_option("--report", o.report_path, "Write the report here instead of stdout");
    cmd->add_flag("--json", o.json, "JSON report (default)");
    if (with_csv) {
        cmd->add_flag("--csv", o.csv, "CSV report with a header row");
    }
}

void add_search(CLI::App* cmd, SearchConfig& s) {
    cmd->add_option("--exact-cutoff", s.exact_cutoff, "Enumerate all subsets up to this size")->capture_default_str();
    cmd->add_option("--samples", s.samples, "Random subsets above the cutoff")->capture_default_str();
    cmd->add_option("--seed", s.seed, "Seed of the subset sampler")->capture_default_str();
    cmd->add_option("--workers", s.workers, "Worker threads (0 = hardware)")->capture_default_str();
    cmd->add_flag("!--no-greedy", s.greedy, "Skip the greedy single-flip ascent");
    cmd->add_flag("!--no-blocks", s.decompose_blocks, "Do not split block-diagonal pairs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schauder-basis constants, Olevskii constructions and spectral selection"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Output out;
    SearchConfig search;

    // haar
    int k = 1;
    double alpha = kDefaultAlpha;
    std::string out_path;
    std::string gstar_out;
    auto* haar = app.add_subcommand("haar", "Haar-type orthogonal matrix A_k");
    haar->add_option("--k", k, "Level, 2^k rows")->required();
    haar->add_option("--out", out_path, "Matrix file (stdout if omitted)");

    auto* weight = app.add_subcommand("weight", "Diagonal weight matrix T_(k,alpha)");
    weight->add_option("--k", k, "Level")->required();
    weight->add_option("--alpha", alpha, "alpha in (1/sqrt 2, 1)")->capture_default_str();
    weight->add_option("--out", out_path, "Matrix file");

    auto* block = app.add_subcommand("block", "Olevskii block pair (T A^T, A T^{-1})");
    block->add_option("--k", k, "Level")->required();
    block->add_option("--alpha", alpha, "alpha in (1/sqrt 2, 1)")->capture_default_str();
    block->add_option("--out", out_path, "File for F");
    block->add_option("--gstar-out", gstar_out, "File for G*");
    add_output(block, out, false);

    std::size_t n = 1;
    auto* counter = app.add_subcommand("counterexample", "Summing-type pair whose inverse rows are not l2");
    counter->add_option("--n", n, "Section size")->required();
    counter->add_option("--out", out_path, "File for F");
    counter->add_option("--gstar-out", gstar_out, "File for G*");
    add_output(counter, out, false);

    std::string matrix_path;
    std::string gstar_path;
    auto* constants = app.add_subcommand("constants", "Basis and unconditional constants of a pair");
    constants->add_option("--matrix", matrix_path, "F (columns are the basis vectors)")->required();
    constants->add_option("--gstar", gstar_path, "G* (defaults to the inverse of F)");
    add_search(constants, search);
    add_output(constants, out, true);

    auto* dual = app.add_subcommand("dual-constants", "Basis constant of the dual system");
    dual->add_option("--matrix", matrix_path, "F")->required();
    dual->add_option("--gstar", gstar_path, "G* (defaults to the inverse of F)");
    add_output(dual, out, false);

    std::string spectrum_arg;
    std::vector<std::size_t> sections;
    RieszThresholds thresholds;
    auto* riesz = app.add_subcommand("riesz", "Condition numbers of leading sections");
    auto* riesz_matrix = riesz->add_option("--matrix", matrix_path, "Matrix file");
    riesz->add_option("--spectrum", spectrum_arg, "Use diag(spectrum): harmonic:N, geometric:r:N or a file")
        ->excludes(riesz_matrix);
    riesz->add_option("--sections", sections, "Increasing section sizes")->delimiter(',')->required();
    riesz->add_option("--bound", thresholds.bound, "Bounded threshold")->capture_default_str();
    riesz->add_option("--divergence", thresholds.divergence, "Divergence threshold")->capture_default_str();
    add_output(riesz, out, true);

    std::string positive_out;
    auto* polar = app.add_subcommand("polar", "Polar decomposition M = U A");
    polar->add_option("--matrix", matrix_path, "Square nonsingular matrix")->required();
    polar->add_option("--unitary-out", out_path, "File for U");
    polar->add_option("--positive-out", positive_out, "File for A");
    add_output(polar, out, false);

    std::string left_path;
    std::vector<double> diag_entries;
    std::vector<std::size_t> perm_entries;
    auto* transform = app.add_subcommand("transform", "Apply X F, F D or F U_pi to a pair");
    transform->add_option("--matrix", matrix_path, "F")->required();
    transform->add_option("--gstar", gstar_path, "G* (defaults to the inverse of F)");
    auto* t_left = transform->add_option("--left", left_path, "Invertible X for (X F, G* X^-1)");
    auto* t_diag = transform->add_option("--diag", diag_entries, "Nonzero diagonal d for (F D, D^-1 G*)")->delimiter(',');
    auto* t_perm = transform->add_option("--perm", perm_entries, "1-based permutation pi(1),...,pi(N)")->delimiter(',');
    t_left->excludes(t_diag)->excludes(t_perm);
    t_diag->excludes(t_perm);
    transform->add_option("--out", out_path, "File for the new F");
    transform->add_option("--gstar-out", gstar_out, "File for the new G*");
    add_search(transform, search);
    add_output(transform, out, false);

    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double delta = 0.0;
    double epsilon = 1e-9;
    std::vector<double> blowup;
    auto* lp = app.add_subcommand("lp-witness", "Rank-1 conjugation witness ||A P A^-1||");
    lp->add_option("--lambda1", lambda1, "Bottom of the spectrum")->capture_default_str();
    lp->add_option("--lambda2", lambda2, "Top of the spectrum")->capture_default_str();
    lp->add_option("--delta", delta, "Spectral window width")->capture_default_str();
    lp->add_option("--epsilon", epsilon, "Slack on the bound")->capture_default_str();
    lp->add_option("--blowup", blowup, "Flat list odd1,even1,odd2,even2,... of block spectra")->delimiter(',');
    add_output(lp, out, false);

    double window_delta = 2.0;
    std::vector<double> ts;
    auto* profile = app.add_subcommand("profile", "Card([t/delta, t] cap spectrum) for each t");
    profile->add_option("--spectrum", spectrum_arg, "harmonic:N, geometric:r:N or a file")->required();
    profile->add_option("--delta", window_delta, "delta > 1")->capture_default_str();
    profile->add_option("--ts", ts, "Window tops")->delimiter(',')->required();
    add_output(profile, out, true);

    int levels = 1;
    std::string plan_path;
    std::string export_dir;
    PlanValidationOptions validation;
    auto* select = app.add_subcommand("select", "Choose Delta_1..Delta_K and assemble the conditional model");
    select->add_option("--spectrum", spectrum_arg, "harmonic:N, geometric:r:N or a file")->required();
    select->add_option("--alpha", alpha, "alpha in (1/sqrt 2, 1)")->capture_default_str();
    select->add_option("--delta", window_delta, "delta > 1")->capture_default_str();
    select->add_option("--levels", levels, "Number of levels K")->capture_default_str();
    select->add_option("--plan", plan_path, "Validate this plan JSON instead of selecting one");
    select->add_option("--ratio-bound", validation.ratio_bound, "Bound on d_k / c_k")->capture_default_str();
    select->add_option("--export-dir", export_dir, "Write F, Gstar, X, U, C matrices here");
    add_output(select, out, false);

    std::vector<double> points;
    double cut_ratio = 0.0;
    auto* cut = app.add_subcommand("cut", "Refine a decreasing grid so consecutive ratios are <= M");
    auto* cut_points = cut->add_option("--points", points, "Decreasing positive points")->delimiter(',');
    cut->add_option("--spectrum", spectrum_arg, "Use a spectrum sample as the points")->excludes(cut_points);
    cut->add_option("--ratio", cut_ratio, "M > 1 (default max(2, 1.1 mu_max / mu_1))");
    add_output(cut, out, true);

    std::size_t tail = 100;
    double tolerance = 0.05;
    auto* ratio = app.add_subcommand("ratio-check", "Tail test of lambda_n / lambda_{n+1} -> 1");
    ratio->add_option("--spectrum", spectrum_arg, "harmonic:N, geometric:r:N or a file")->required();
    ratio->add_option("--tail", tail, "Number of tail ratios")->capture_default_str();
    ratio->add_option("--tolerance", tolerance, "Allowed excess over 1")->capture_default_str();
    add_output(ratio, out, true);

    HarmonicDemoOptions demo_options;
    auto* demo = app.add_subcommand("demo-harmonic", "Conditional model of diag(1, 1/2, 1/3, ...)");
    demo->add_option("--levels", levels, "Number of levels K (exact constants for K <= 4)")->capture_default_str();
    demo->add_option("--alpha", alpha, "alpha in (1/sqrt 2, 1)")->capture_default_str();
    demo->add_option("--delta", window_delta, "delta > 1")->capture_default_str();
    demo->add_option("--length", demo_options.spectrum_length, "Harmonic sample length")->capture_default_str();
    demo->add_option("--sections", demo_options.riesz_sections, "Riesz section sizes")->delimiter(',');
    add_search(demo, search);
    add_output(demo, out, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (haar->parsed()) {
            write_matrix_to(haar_matrix(k), out_path, "A_" + std::to_string(k));
        } else if (weight->parsed()) {
            write_matrix_to(weight_matrix(k, alpha), out_path,
                            "T_(" + std::to_string(k) + "," + format_double(alpha) + ")");
        } else if (block->parsed() || counter->parsed()) {
            const BasisPair pair = block->parsed() ? olevskii_block(k, alpha) : summing_counterexample(n);
            write_matrix_to(pair.f(), out_path, "F");
            if (!gstar_out.empty()) {
                save_matrix(gstar_out, pair.gstar(), "G*");
            }
            if (!out_path.empty() && out_path != "-") {
                const auto q = quasinormality_bounds(pair.f());
                emit_json(Json{{"size", pair.size()},
                               {"columnNorms", Json{{"min", q.min}, {"max", q.max}}},
                               {"biorthogonalityError", identity_deviation(pair.gstar() * pair.f())}},
                          out);
            }
        } else if (constants->parsed()) {
            const BasisPair pair = load_pair(matrix_path, gstar_path);
            const auto basis = basis_constant(pair);
            const auto uncond = unconditional_constant(pair, search);
            if (out.csv) {
                Csv csv({"constant", "value", "mode", "evaluations"});
                csv.row("basis", basis.value, to_string(basis.mode), static_cast<std::size_t>(basis.evaluations));
                csv.row("unconditional", uncond.value, to_string(uncond.mode),
                        static_cast<std::size_t>(uncond.evaluations));
                emit(csv.str(), out.report_path);
            } else {
                emit_json(Json{{"basis", basis.value},
                               {"basisEstimate", to_json(basis)},
                               {"unconditional", to_json(uncond)},
                               {"size", pair.size()}},
                          out);
            }
        } else if (dual->parsed()) {
            const BasisPair pair = load_pair(matrix_path, gstar_path);
            emit_json(Json{{"dual", dual_basis_constant(pair)}, {"basis", basis_constant(pair).value}}, out);
        } else if (riesz->parsed()) {
            if (matrix_path.empty() && spectrum_arg.empty()) {
                throw InvalidParameter("riesz needs --matrix or --spectrum");
            }
            std::optional<DenseMatrix> m;
            if (!matrix_path.empty()) {
                m = load_matrix(matrix_path);
            } else {
                const auto s = spectrum_from_argument(spectrum_arg);
                m = DenseMatrix::diagonal(s.values());
            }
            const auto report = riesz_diagnostic(*m, sections, thresholds);
            if (out.csv) {
                Csv csv({"section", "condition"});
                for (std::size_t i = 0; i < report.section_sizes.size(); ++i) {
                    csv.row(report.section_sizes[i], report.condition_numbers[i]);
                }
                emit(csv.str(), out.report_path);
            } else {
                emit_json(to_json(report), out);
            }
        } else if (polar->parsed()) {
            const DenseMatrix m = load_matrix(matrix_path);
            const auto factors = polar_decompose(m);
            if (!out_path.empty()) {
                save_matrix(out_path, factors.unitary, "U");
            }
            if (!positive_out.empty()) {
                save_matrix(positive_out, factors.positive, "A");
            }
            emit_json(Json{{"unitaryDeviation", identity_deviation(factors.unitary.transpose() * factors.unitary)},
                           {"reconstructionError", max_abs_diff(factors.unitary * factors.positive, m)},
                           {"positiveSpectrum", singular_values(factors.positive)}},
                      out);
        } else if (transform->parsed()) {
            const BasisPair pair = load_pair(matrix_path, gstar_path);
            std::optional<BasisPair> result;
            std::string law;
            if (!left_path.empty()) {
                result = transform_left(load_matrix(left_path), pair);
                law = "left";
            } else if (!diag_entries.empty()) {
                result = transform_right_diagonal(pair, diag_entries);
                law = "diagonal";
            } else if (!perm_entries.empty()) {
                result = transform_right_permutation(pair, to_zero_based(perm_entries, "--perm"));
                law = "permutation";
            } else {
                throw InvalidParameter("transform needs one of --left, --diag, --perm");
            }
            if (!out_path.empty()) {
                save_matrix(out_path, result->f(), "F");
            }
            if (!gstar_out.empty()) {
                save_matrix(gstar_out, result->gstar(), "G*");
            }
            Json report{{"law", law},
                        {"before", Json{{"basis", to_json(basis_constant(pair))},
                                        {"unconditional", to_json(unconditional_constant(pair, search))}}},
                        {"after", Json{{"basis", to_json(basis_constant(*result))},
                                       {"unconditional", to_json(unconditional_constant(*result, search))}}}};
            if (!left_path.empty()) {
                report["conditionNumber"] = json_number(condition_number(load_matrix(left_path)));
            }
            emit_json(report, out);
        } else if (lp->parsed()) {
            if (!blowup.empty()) {
                if (blowup.size() % 2 != 0) {
                    throw InvalidParameter("--blowup needs an even number of values");
                }
                std::vector<std::pair<double, double>> pairs;
                for (std::size_t i = 0; i < blowup.size(); i += 2) {
                    pairs.emplace_back(blowup[i], blowup[i + 1]);
                }
                emit_json(Json{{"norms", projection_blowup_witness(pairs)}}, out);
            } else {
                const auto w = rank1_conjugation_witness(lambda1, lambda2, delta, epsilon);
                emit_json(Json{{"norm", w.norm}, {"bound", w.bound}, {"satisfied", w.satisfied}}, out);
                if (!w.satisfied) {
                    return kExitValidation;
                }
            }
        } else if (profile->parsed()) {
            const auto s = spectrum_from_argument(spectrum_arg);
            const auto counts = cardinality_profile(s, window_delta, ts);
            if (out.csv) {
                Csv csv({"t", "count"});
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    csv.row(ts[i], counts[i]);
                }
                emit(csv.str(), out.report_path);
            } else {
                emit_json(Json{{"delta", window_delta}, {"ts", ts}, {"counts", counts}}, out);
            }
        } else if (select->parsed()) {
            const auto s = spectrum_from_argument(spectrum_arg);
            Json report;
            OlevskiiPlan plan;
            if (!plan_path.empty()) {
                std::ifstream in(plan_path);
                if (!in) {
                    throw IoError("cannot open plan file '" + plan_path + "'");
                }
                Json parsed;
                try {
                    parsed = Json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw IoError(plan_path + ": " + e.what());
                }
                plan = plan_from_json(parsed.contains("plan") ? parsed.at("plan") : parsed);
                report["plan"] = to_json(plan);
            } else {
                const auto selection = select_subsets(s, alpha, window_delta, levels);
                plan = selection.plan;
                report["selection"] = to_json(selection);
            }
            const auto v = validate_plan(s, plan, validation);
            report["validation"] = to_json(v);
            if (v.valid() && !export_dir.empty()) {
                const auto model = keylemma_assemble(s, plan, validation);
                std::filesystem::create_directories(export_dir);
                const std::filesystem::path dir(export_dir);
                save_matrix((dir / "F.mtx").string(), model.f, "F");
                save_matrix((dir / "Gstar.mtx").string(), model.gstar, "G*");
                save_matrix((dir / "X.mtx").string(), model.x, "X");
                save_matrix((dir / "U.mtx").string(), model.u, "U");
                save_matrix((dir / "C.mtx").string(), model.c, "C = T Ut U");
                report["rearrangement"] = one_based(model.rearrangement);
            }
            emit_json(report, out);
            if (!v.valid()) {
                return kExitValidation;
            }
        } else if (cut->parsed()) {
            std::vector<double> mu = points;
            if (!spectrum_arg.empty()) {
                const auto s = spectrum_from_argument(spectrum_arg);
                mu.assign(s.values().begin(), s.values().end());
            }
            if (mu.empty()) {
                throw InvalidParameter("cut needs --points or --spectrum");
            }
            const double m = cut_ratio > 0.0 ? cut_ratio : default_cut_ratio(mu.front(), mu.front());
            const auto grid = segment_cut(mu, m);
            if (out.csv) {
                Csv csv({"index", "value"});
                for (std::size_t i = 0; i < grid.points.size(); ++i) {
                    csv.row(i + 1, grid.points[i]);
                }
                emit(csv.str(), out.report_path);
            } else {
                emit_json(Json{{"ratio", m}, {"points", grid.points}, {"subsegments", grid.subsegments}}, out);
            }
        } else if (ratio->parsed()) {
            const auto s = spectrum_from_argument(spectrum_arg);
            const auto report = ratio_limit_check(s, tail, tolerance);
            if (out.csv) {
                Csv csv({"n", "ratio"});
                const std::size_t first = s.size() - tail;
                for (std::size_t i = 0; i < report.tail_ratios.size(); ++i) {
                    csv.row(first + i, report.tail_ratios[i]);
                }
                emit(csv.str(), out.report_path);
            } else {
                emit_json(to_json(report), out);
            }
            if (!report.passes) {
                return kExitValidation;
            }
        } else if (demo->parsed()) {
            demo_options.search = search;
            const auto report = harmonic_demo(levels, alpha, window_delta, demo_options);
            if (out.csv) {
                Csv csv({"level", "basis", "unconditional", "mode"});
                for (std::size_t i = 0; i < report.basis_by_level.size(); ++i) {
                    csv.row(i + 1, report.basis_by_level[i], report.unconditional_by_level[i].value,
                            to_string(report.unconditional_by_level[i].mode));
                }
                emit(csv.str(), out.report_path);
            } else {
                emit_json(to_json(report), out);
            }
            if (!report.validation.valid()) {
                return kExitValidation;
            }
        }
    } catch (const InsufficientCardinality& e) {
        std::cerr << "validation: " << e.what() << '\n';
        return kExitValidation;
    } catch (const PlanRejected& e) {
        std::cerr << "validation: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationFailure& e) {
        std::cerr << "validation: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}
