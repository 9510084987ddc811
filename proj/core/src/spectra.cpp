#include "armsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "armsim/errors.hpp"
#include "armsim/parallel.hpp"
#include "armsim/units.hpp"

namespace armsim {

using cd = std::complex<double>;

namespace {

constexpr std::size_t kProbeChunk = 16;

void require_grid(std::span<const double> grid, std::size_t min_points, const char* who) {
    if (grid.size() < min_points) {
        throw std::invalid_argument(std::string(who) + ": probe grid needs at least " + std::to_string(min_points) +
                                    " points");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(std::string(who) + ": probe grid must be strictly increasing");
        }
    }
}

// Everything needed to evaluate the response of one parameter set.
struct ResponseContext {
    ArmParams params;
    Liouvillian liouvillian;
    DensityMatrix reference;
    ReferenceKind kind;
    Operator drive;
    Operator observe;
};

ResponseContext make_context(const ArmParams& params, StatePrep prep) {
    params.validate();
    const HilbertDims dims = params.dims();
    const auto collapses = standard_collapses(dims, params.kappa, params.gamma);
    Liouvillian l = build_liouvillian(build_hamiltonian(params), collapses, dims);
    DensityMatrix ref = reference_state(params, l, prep);
    const ReferenceKind kind = prep == StatePrep::steady ? ReferenceKind::stationary : ReferenceKind::conditioned;
    return ResponseContext{params,
                           std::move(l),
                           std::move(ref),
                           kind,
                           drive_operator(dims),
                           embed(annihilation(dims.n_max()), Subsystem::resonator, dims)};
}

ResponseSolver make_solver(const ResponseContext& ctx) {
    return ResponseSolver(ctx.liouvillian, ctx.reference, ctx.drive, ctx.observe, ctx.kind);
}

// Amplitudes on `grid`, chunked so each task reuses one sparsity analysis.
std::vector<cd> evaluate_grid(const ResponseContext& ctx, std::span<const double> grid, int workers) {
    std::vector<cd> out(grid.size());
    const std::size_t chunks = (grid.size() + kProbeChunk - 1) / kProbeChunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        ResponseSolver solver = make_solver(ctx);
        const std::size_t end = std::min(grid.size(), (c + 1) * kProbeChunk);
        for (std::size_t j = c * kProbeChunk; j < end; ++j) out[j] = solver(grid[j]);
    });
    return out;
}

std::string describe_point(SecondAxis axis, double axis_value, double probe) {
    std::ostringstream os;
    os << "grid point (";
    if (axis == SecondAxis::qubit_freq) os << "omega_q=" << axis_value << " GHz, ";
    if (axis == SecondAxis::theta) os << "theta=" << axis_value << " rad, ";
    os << "omega_p=" << probe << " GHz)";
    return os.str();
}

// Index of the eigenvector with the largest squared overlap with `target`.
std::pair<Eigen::Index, double> best_overlap(const Eigen::MatrixXcd& vecs, const StateVector& target) {
    const Eigen::VectorXd overlaps = (vecs.adjoint() * target).cwiseAbs2();
    Eigen::Index idx = 0;
    const double best = overlaps.maxCoeff(&idx);
    return {idx, best};
}

// Three-point parabola through (x0,y0),(x1,y1),(x2,y2); returns the vertex.
Peak parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curvature = (d1 - d0) / (x2 - x0);  // = a in y = a x^2 + ...
    if (curvature >= 0.0) return {x1, y1};
    const double xv = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
    const double slope_at_x1 = d0 + curvature * (x1 - x0);
    const double yv = y1 - slope_at_x1 * slope_at_x1 / (4.0 * curvature);
    return {std::clamp(xv, x0, x2), yv};
}

std::vector<Peak> merge_and_threshold(std::vector<Peak> peaks, double max_height, double threshold, double min_sep) {
    for (auto& p : peaks) p.height /= max_height;
    std::erase_if(peaks, [threshold](const Peak& p) { return p.height < threshold; });
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
    std::vector<Peak> merged;
    for (const auto& p : peaks) {
        if (!merged.empty() && p.position - merged.back().position < min_sep) {
            if (p.height > merged.back().height) merged.back() = p;
        } else {
            merged.push_back(p);
        }
    }
    return merged;
}

std::optional<double> splitting_from_peaks(std::vector<Peak> peaks) {
    if (peaks.empty()) throw std::invalid_argument("extract_splitting: slice has no local maximum");
    if (peaks.size() == 1) return std::nullopt;
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return std::abs(peaks[0].position - peaks[1].position);
}

}  // namespace

// ---------------------------------------------------------------------------

void SweepSpec::validate() const {
    require_grid(probe_grid, 1, "SweepSpec");
    if (axis != SecondAxis::none && axis_values.empty()) {
        throw std::invalid_argument("SweepSpec: second axis selected but no values given");
    }
    if (method == ResponseMethod::time_domain && !(eps_p > 0.0)) {
        throw std::invalid_argument("SweepSpec: time-domain sweeps need eps_p > 0");
    }
}

std::span<const SpectrumPoint> SpectrumResult::slice(std::size_t i) const {
    const std::size_t n = probe_grid.size();
    if (i >= slice_count()) throw std::out_of_range("SpectrumResult::slice: index out of range");
    return std::span<const SpectrumPoint>(points).subspan(i * n, n);
}

ArmParams apply_axis(const ArmParams& params, SecondAxis axis, double value) {
    ArmParams p = params;
    switch (axis) {
        case SecondAxis::none:
            break;
        case SecondAxis::qubit_freq:
            p.omega_q = value;
            break;
        case SecondAxis::theta:
            p.coupling = Polar{params.polar().g, value};
            break;
    }
    return p;
}

DensityMatrix reference_state(const ArmParams& params, const Liouvillian& l, StatePrep prep) {
    if (prep == StatePrep::steady) return steady_state(l);
    const HilbertDims dims = params.dims();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_hamiltonian(params));
    const QubitLevel level = prep == StatePrep::ground ? QubitLevel::ground : QubitLevel::excited;
    const auto [idx, overlap] = best_overlap(es.eigenvectors(), basis_state(level, 0, dims));
    if (overlap < 0.5) {
        throw SolverError("reference_state: no dressed state is predominantly |" +
                          std::string(level == QubitLevel::ground ? "g" : "e") + ",0> (overlap " +
                          std::to_string(overlap) + ")");
    }
    return DensityMatrix::pure(dims, es.eigenvectors().col(idx));
}

SpectrumResult transmission_map(const ArmParams& params, const SweepSpec& sweep, int workers) {
    params.validate();
    sweep.validate();

    SpectrumResult result;
    result.axis = sweep.axis;
    result.probe_grid = sweep.probe_grid;
    result.axis_values = sweep.axis == SecondAxis::none
                             ? std::vector<double>{std::numeric_limits<double>::quiet_NaN()}
                             : sweep.axis_values;
    const std::size_t slices = result.axis_values.size();
    const std::size_t probes = sweep.probe_grid.size();

    std::vector<std::optional<ResponseContext>> contexts(slices);
    parallel_for(slices, workers, [&](std::size_t s) {
        try {
            contexts[s].emplace(make_context(apply_axis(params, sweep.axis, result.axis_values[s]), sweep.prep));
        } catch (const std::exception& e) {
            throw SolverError(describe_point(sweep.axis, result.axis_values[s], sweep.probe_grid.front()) +
                              ": " + e.what());
        }
    });

    std::vector<cd> amplitudes(slices * probes);
    if (sweep.method == ResponseMethod::linear_response) {
        const std::size_t chunks = (probes + kProbeChunk - 1) / kProbeChunk;
        parallel_for(slices * chunks, workers, [&](std::size_t task) {
            const std::size_t s = task / chunks;
            const std::size_t c = task % chunks;
            const ResponseContext& ctx = *contexts[s];
            ResponseSolver solver = make_solver(ctx);
            const std::size_t end = std::min(probes, (c + 1) * kProbeChunk);
            for (std::size_t j = c * kProbeChunk; j < end; ++j) {
                try {
                    amplitudes[s * probes + j] = solver(sweep.probe_grid[j]);
                } catch (const std::exception& e) {
                    throw SolverError(describe_point(sweep.axis, result.axis_values[s], sweep.probe_grid[j]) +
                                      ": " + e.what());
                }
            }
        });
    } else {
        parallel_for(slices * probes, workers, [&](std::size_t k) {
            const std::size_t s = k / probes;
            const std::size_t j = k % probes;
            const ResponseContext& ctx = *contexts[s];
            try {
                amplitudes[k] = time_domain_amplitude(ctx.params, ctx.reference, sweep.probe_grid[j], sweep.eps_p);
            } catch (const std::exception& e) {
                throw SolverError(describe_point(sweep.axis, result.axis_values[s], sweep.probe_grid[j]) + ": " +
                                  e.what());
            }
        });
    }

    result.points.resize(slices * probes);
    for (std::size_t s = 0; s < slices; ++s) {
        double peak = 0.0;
        for (std::size_t j = 0; j < probes; ++j) peak = std::max(peak, std::abs(amplitudes[s * probes + j]));
        for (std::size_t j = 0; j < probes; ++j) {
            const cd a = amplitudes[s * probes + j];
            result.points[s * probes + j] = SpectrumPoint{sweep.probe_grid[j], result.axis_values[s], a,
                                                          peak > 0.0 ? std::abs(a) / peak : 0.0};
        }
    }
    return result;
}

std::complex<double> time_domain_amplitude(const ArmParams& params, const DensityMatrix& reference, double omega_p,
                                           double eps_p, const TimeDomainOptions& options) {
    params.validate();
    if (!(params.kappa > 0.0)) throw std::invalid_argument("time_domain_amplitude: needs kappa > 0 to settle");
    if (!(omega_p > 0.0) || !(eps_p > 0.0)) {
        throw std::invalid_argument("time_domain_amplitude: omega_p and eps_p must be > 0");
    }
    const HilbertDims dims = params.dims();
    const double period = 1.0 / omega_p;
    const double settle = options.settle_time > 0.0 ? options.settle_time : 12.0 / (units::pi * params.kappa);
    const double window_req = options.window > 0.0 ? options.window : std::max(50.0, 200.0 * period);
    const auto periods = static_cast<long long>(std::ceil(window_req / period));
    constexpr int samples_per_period = 16;
    const double interval = period / samples_per_period;
    const long long first = static_cast<long long>(std::ceil(settle / interval));
    const long long count = periods * samples_per_period;
    const double t_final = static_cast<double>(first + count) * interval;

    EvolveOptions opts;
    opts.atol = options.atol;
    opts.rtol = options.rtol;
    opts.record_interval = interval;
    opts.record_from = static_cast<double>(first) * interval;
    opts.observables = {embed(annihilation(dims.n_max()), Subsystem::resonator, dims)};

    const ProbeDrive drive{drive_operator(dims), eps_p, omega_p};
    const auto collapses = standard_collapses(dims, params.kappa, params.gamma);
    const Trajectory traj =
        evolve(build_hamiltonian(params), drive, collapses, reference, t_final, period / 50.0, opts);

    // Rectangle rule over an integer number of periods (last record excluded).
    cd acc = 0.0;
    const std::size_t n = traj.times.size() - 1;
    for (std::size_t k = 0; k < n; ++k) {
        acc += traj.expectations[k][0] * std::polar(1.0, units::two_pi * omega_p * traj.times[k]);
    }
    return acc / (static_cast<double>(n) * eps_p);
}

// ---------------------------------------------------------------------------

std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double threshold) {
    if (x.size() != y.size()) throw std::invalid_argument("find_peaks: x and y differ in length");
    require_grid(x, 3, "find_peaks");
    const double max_y = *std::max_element(y.begin(), y.end());
    if (!(max_y > 0.0)) return {};
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            peaks.push_back(parabolic_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]));
        }
    }
    const double step = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    double norm = max_y;
    for (const auto& p : peaks) norm = std::max(norm, p.height);
    return merge_and_threshold(std::move(peaks), norm, threshold, 2.0 * step);
}

std::optional<double> extract_splitting(std::span<const double> probe, std::span<const double> transmission) {
    return splitting_from_peaks(find_peaks(probe, transmission, 0.5));
}

std::optional<double> extract_splitting(std::span<const SpectrumPoint> slice) {
    std::vector<double> x, y;
    x.reserve(slice.size());
    y.reserve(slice.size());
    for (const auto& p : slice) {
        x.push_back(p.probe);
        y.push_back(p.transmission);
    }
    return extract_splitting(x, y);
}

std::vector<Peak> resolve_peaks(const ArmParams& params, std::span<const double> probe_grid, StatePrep prep,
                                int workers) {
    require_grid(probe_grid, 3, "resolve_peaks");
    const ResponseContext ctx = make_context(params, prep);
    const std::vector<cd> amps = evaluate_grid(ctx, probe_grid, workers);
    std::vector<double> mags(amps.size());
    std::transform(amps.begin(), amps.end(), mags.begin(), [](cd a) { return std::abs(a); });
    const double max_grid = *std::max_element(mags.begin(), mags.end());

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < mags.size(); ++i) {
        if (mags[i] > mags[i - 1] && mags[i] >= mags[i + 1] && mags[i] > 1e-3 * max_grid) candidates.push_back(i);
    }

    std::vector<Peak> refined(candidates.size());
    parallel_for(candidates.size(), workers, [&](std::size_t k) {
        const std::size_t i = candidates[k];
        ResponseSolver solver = make_solver(ctx);
        const double center = probe_grid[i];
        const double lo = probe_grid[i - 1] - center;
        const double hi = probe_grid[i + 1] - center;
        const double scale = std::max(-lo, hi);
        // Search in a scaled coordinate so the tolerance is relative to the grid step.
        auto neg_mag = [&](double u) { return -std::abs(solver(center + u * scale)); };
        std::uintmax_t iters = 200;
        const auto [u, f] = boost::math::tools::brent_find_minima(neg_mag, lo / scale, hi / scale, 30, iters);
        refined[k] = Peak{center + u * scale, -f};
    });

    double norm = max_grid;
    for (const auto& p : refined) norm = std::max(norm, p.height);
    const double step = (probe_grid.back() - probe_grid.front()) / static_cast<double>(probe_grid.size() - 1);
    return merge_and_threshold(std::move(refined), norm, 0.5, 2.0 * step);
}

std::optional<double> measure_splitting(const ArmParams& params, std::span<const double> probe_grid, StatePrep prep,
                                        int workers) {
    return splitting_from_peaks(resolve_peaks(params, probe_grid, prep, workers));
}

// ---------------------------------------------------------------------------

DispersiveReport dispersive_formulas(const ArmParams& params) {
    params.validate();
    const DerivedDetunings dt = detunings(params);
    if (dt.delta == 0.0) {
        throw std::invalid_argument("dispersive_formulas: Delta = 0, dispersive regime undefined");
    }
    const JcAjc c = params.jc_ajc();
    DispersiveReport r;
    r.delta = dt.delta;
    r.sigma = dt.sigma;
    r.theta = params.polar().theta;
    r.chi_jc = c.g_jc * c.g_jc / dt.delta;
    r.chi_ajc = -c.g_ajc * c.g_ajc / dt.sigma;
    r.chi_rabi = r.chi_jc + r.chi_ajc;
    r.warnings = dispersive_warnings(params);
    return r;
}

DispersiveReport dispersive_report(const ArmParams& params) {
    DispersiveReport r = dispersive_formulas(params);
    r.chi_numeric = chi_numeric(params);
    return r;
}

std::vector<std::string> dispersive_warnings(const ArmParams& params) {
    std::vector<std::string> out;
    const DerivedDetunings dt = detunings(params);
    const JcAjc c = params.jc_ajc();
    if (std::abs(c.g_jc) > std::abs(dt.delta) / 5.0) {
        out.push_back("g_JC exceeds |Delta|/5; dispersive formulas are unreliable");
    }
    if (std::abs(c.g_ajc) > std::abs(dt.sigma) / 5.0) {
        out.push_back("g_AJC exceeds Sigma/5; dispersive formulas are unreliable");
    }
    return out;
}

double chi_numeric(const ArmParams& params) {
    ArmParams p = params;
    p.n_max = std::max(params.n_max, 20);
    p.validate();
    const HilbertDims dims = p.dims();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_hamiltonian(p));
    if (es.info() != Eigen::Success) throw SolverError("chi_numeric: diagonalization failed");

    auto energy = [&](QubitLevel q, int n) {
        const auto [idx, overlap] = best_overlap(es.eigenvectors(), basis_state(q, n, dims));
        if (overlap < 0.7) {
            throw SolverError("chi_numeric: ambiguous dressed-state label for |" +
                              std::string(q == QubitLevel::ground ? "g" : "e") + "," + std::to_string(n) +
                              "> (squared overlap " + std::to_string(overlap) + ")");
        }
        return es.eigenvalues()(idx);
    };
    const double e_g0 = energy(QubitLevel::ground, 0);
    const double e_g1 = energy(QubitLevel::ground, 1);
    const double e_e0 = energy(QubitLevel::excited, 0);
    const double e_e1 = energy(QubitLevel::excited, 1);
    return 0.5 * ((e_e1 - e_e0) - (e_g1 - e_g0));
}

std::optional<double> sweet_spot(const ArmParams& params, double theta_lo, double theta_hi, int coarse_points) {
    params.validate();
    const double g = params.polar().g;
    if (!(g > 0.0)) throw std::invalid_argument("sweet_spot: requires g > 0 (chi vanishes identically at g = 0)");
    if (!(theta_hi > theta_lo) || coarse_points < 2) {
        throw std::invalid_argument("sweet_spot: need theta_hi > theta_lo and at least two scan points");
    }
    auto chi_at = [&](double theta) { return chi_numeric(with_polar(params, g, theta)); };

    double prev_theta = theta_lo;
    double prev_chi = chi_at(theta_lo);
    if (prev_chi == 0.0) return theta_lo;
    for (int i = 1; i < coarse_points; ++i) {
        const double theta = theta_lo + (theta_hi - theta_lo) * i / (coarse_points - 1);
        const double chi = chi_at(theta);
        if (chi == 0.0) return theta;
        if (std::signbit(chi) != std::signbit(prev_chi)) {
            double lo = prev_theta, hi = theta, chi_lo = prev_chi;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double chi_mid = chi_at(mid);
                if (std::abs(chi_mid) < 1e-6 && hi - lo < 1e-10) return mid;
                if (std::signbit(chi_mid) == std::signbit(chi_lo)) {
                    lo = mid;
                    chi_lo = chi_mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_theta = theta;
        prev_chi = chi;
    }
    return std::nullopt;
}

std::optional<double> sweet_spot_closed_form(const ArmParams& params) {
    const DerivedDetunings dt = detunings(params);
    // g^2 cos^2/Delta = g^2 sin^2/Sigma  =>  tan^2 theta = Sigma / Delta
    if (!(dt.delta > 0.0) || !(dt.sigma > 0.0)) return std::nullopt;
    return std::atan(std::sqrt(dt.sigma / dt.delta));
}

ConditionedPeaks conditioned_peaks(const ArmParams& params, std::span<const double> probe_grid, int workers) {
    ArmParams p = params;
    p.gamma = 0.0;
    auto strongest = [&](StatePrep prep) {
        const std::vector<Peak> peaks = resolve_peaks(p, probe_grid, prep, workers);
        if (peaks.empty()) throw SolverError("conditioned_peaks: no resonator line inside the probe grid");
        return std::max_element(peaks.begin(), peaks.end(),
                                [](const Peak& a, const Peak& b) { return a.height < b.height; })
            ->position;
    };
    return {strongest(StatePrep::ground), strongest(StatePrep::excited)};
}

// ---------------------------------------------------------------------------

std::vector<ConvergenceRow> convergence_check(const ArmParams& params, std::span<const int> n_max_list,
                                              ConvergenceQuantity quantity, std::span<const double> probe_grid,
                                              int workers) {
    if (n_max_list.size() < 2) throw std::invalid_argument("convergence_check: need at least two truncations");
    std::vector<ConvergenceRow> rows;
    for (const int n : n_max_list) {
        ArmParams p = params;
        p.n_max = n;
        double value = 0.0;
        switch (quantity) {
            case ConvergenceQuantity::splitting: {
                const auto s = measure_splitting(p, probe_grid, StatePrep::steady, workers);
                if (!s) throw SolverError("convergence_check: no splitting at n_max = " + std::to_string(n));
                value = *s;
                break;
            }
            case ConvergenceQuantity::peak_position: {
                const auto peaks = resolve_peaks(p, probe_grid, StatePrep::steady, workers);
                if (peaks.empty()) throw SolverError("convergence_check: no peak at n_max = " + std::to_string(n));
                value = std::max_element(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
                            return a.height < b.height;
                        })->position;
                break;
            }
            case ConvergenceQuantity::chi: {
                // chi_numeric enforces n_max >= 20 internally; bypass that floor here so
                // the truncation dependence itself is what gets measured.
                value = 0.0;
                const HilbertDims dims(n);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_hamiltonian(p));
                auto energy = [&](QubitLevel q, int k) {
                    const auto [idx, overlap] = best_overlap(es.eigenvectors(), basis_state(q, k, dims));
                    if (overlap < 0.7) throw SolverError("convergence_check: ambiguous dressed-state label");
                    return es.eigenvalues()(idx);
                };
                value = 0.5 * ((energy(QubitLevel::excited, 1) - energy(QubitLevel::excited, 0)) -
                               (energy(QubitLevel::ground, 1) - energy(QubitLevel::ground, 0)));
                break;
            }
        }
        ConvergenceRow row{n, value, std::nullopt};
        if (!rows.empty()) {
            const double prev = rows.back().value;
            row.relative_change = prev == value ? 0.0 : std::abs(value - prev) / std::max(std::abs(prev), 1e-300);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace armsim
