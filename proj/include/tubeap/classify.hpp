#ifndef TUBEAP_CLASSIFY_HPP
#define TUBEAP_CLASSIFY_HPP

// Value distribution of exponential sums in the tail of a tube: the five-way spectrum
// classification and the experiment drivers that check growth, secular vectors and zeros.

#include "tubeap/jessen.hpp"
#include "tubeap/zeros.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tubeap {

enum class CaseId { One = 1, Two = 2, Three = 3, Four = 4, Five = 5, NotExtendable = 0 };

std::string to_string(CaseId id);

struct CaseLabel {
    CaseId case_id = CaseId::NotExtendable;
    std::optional<Vec> shift;        // the Lambda realizing cases 2, 3, 4
    std::vector<std::string> trace;  // shift search, one line per candidate
    std::string notes;
};

/// Decides the case from the spectrum alone. Candidates Lambda are the listed points and limit
/// points, tried in lexicographic order, so the label never depends on input order.
CaseLabel classify_spectrum(const PointSet& sp, const Cone& gamma);

struct ReportRow {
    std::string parameter;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    double std_error = 0.0;
    bool pass = false;
    bool inconclusive = false;
    std::string note;
};

struct VerificationReport {
    std::string name;
    std::vector<ReportRow> rows;
    bool passed = false;
    bool inconclusive = false;
    std::vector<std::string> notes;

    /// passed iff every row passes; inconclusive iff some row is inconclusive.
    void finalize();
};

/// J(R y)/R against h_f(y) along a doubling R schedule (at least five entries).
VerificationReport theorem1_verify(const ExpSum& f, const Cone& gamma, const Vec& y,
                                   const std::vector<double>& R_schedule, const QuadratureParams& params = {});

/// Gaussian-mollified secular vector at scale R,
///   m_R(y_b) = -(1 / (R w^2)) E[u J(R (y_b + u))],  u ~ N(0, w^2 I),
/// the mollifier average of -grad J at R (y_b + u), rewritten by integration by parts. The target is
/// the same expression with J(R y)/R replaced by H_sp(-y). Pass/fail is judged at the final R.
VerificationReport secular_convergence(const ExpSum& f, const Cone& gamma, const std::vector<Vec>& base_points,
                                       const std::vector<double>& R_schedule, double mollifier_width,
                                       const QuadratureParams& params = {});

/// Mollified -grad of y -> H_sp(-y), i.e. the mollified active frequency, with the same quadrature
/// as secular_convergence.
Vec mollified_indicator_gradient(const PointSet& sp, const Vec& y_b, double width);

struct TheoremRParams {
    QuadratureParams quad;
    int slices = 4;
    double slice_half_width = 40.0;
    std::uint64_t seed = 42;
};

/// Linearity of J on the segment [y1, y2] against zeros of f over it.
VerificationReport theoremR_check(const ExpSum& f, const Vec& y1, const Vec& y2, const TheoremRParams& params = {});

struct CaseExperimentParams {
    std::vector<double> t_values = {10.0, 20.0, 40.0};
    int x_probes = 64;
    int targets = 8;
    std::vector<double> q_values = {1.0, 5.0};
    int attempt_budget = 64;
    std::uint64_t seed = 42;
};

VerificationReport run_case_experiment(const ExpSum& f, const Cone& gamma, const CaseLabel& label,
                                       const CaseExperimentParams& params = {});

}  // namespace tubeap

#endif  // TUBEAP_CLASSIFY_HPP
