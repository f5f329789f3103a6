#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace levelea {

/// Fitness-level partition. thresholds holds phi_0 < phi_1 < ... < phi_m;
/// a genotype with fitness f sits at level i when f is in [phi_i, phi_{i+1}),
/// and at level m when f >= phi_m. Level sets A_i partition the search space,
/// superlevel sets H_j = union of A_i for i >= j nest downwards.
struct LevelPartition {
    std::vector<double> thresholds;
    /// Some bound machinery (the associated-chain route) is only sound when
    /// every level set is non-empty; presets set this flag accordingly.
    bool all_levels_nonempty = true;

    int level_count() const { return static_cast<int>(thresholds.size()) - 1; }

    /// Largest i with fitness >= phi_i. Total: values below phi_0 map to 0.
    int level_of(double fitness) const {
        const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), fitness);
        const auto idx = static_cast<int>(it - thresholds.begin()) - 1;
        return idx < 0 ? 0 : idx;
    }

    void validate() const {
        if (thresholds.size() < 2)
            throw std::invalid_argument("LevelPartition: need at least two thresholds");
        for (std::size_t i = 1; i < thresholds.size(); ++i)
            if (!(thresholds[i - 1] < thresholds[i]))
                throw std::invalid_argument("LevelPartition: thresholds must be strictly increasing");
    }
};

/// Per-level population proportions z_1 >= z_2 >= ... >= z_m, z_j = share of
/// the population at level >= j. `lambda` set means the vector came from a
/// concrete population of that size, so every entry is a multiple of 1/lambda.
struct PopulationVector {
    std::vector<double> z;
    std::optional<int> lambda;  // Exact(lambda) when set, Expected otherwise

    int m() const { return static_cast<int>(z.size()); }

    bool is_valid(double tol = 1e-12) const {
        double prev = 1.0 + tol;
        for (const double v : z) {
            if (v < -tol || v > 1.0 + tol || v > prev + tol) return false;
            prev = v;
        }
        if (lambda) {
            if (*lambda < 1) return false;
            for (const double v : z) {
                const double k = v * *lambda;
                if (std::abs(k - std::round(k)) > 1e-9) return false;
            }
        }
        return true;
    }

    void validate(double tol = 1e-12) const {
        if (!is_valid(tol)) throw std::invalid_argument("PopulationVector: invariant violated");
    }

    static PopulationVector zeros(int m) { return PopulationVector{std::vector<double>(m, 0.0), std::nullopt}; }

    /// Builds the vector from per-level population counts (histogram over
    /// levels 0..m); entry j becomes (#individuals at level >= j) / lambda.
    static PopulationVector from_level_counts(const std::vector<int>& counts, int lambda) {
        const int m = static_cast<int>(counts.size()) - 1;
        PopulationVector out;
        out.lambda = lambda;
        out.z.resize(m);
        long long acc = 0;
        for (int j = m; j >= 1; --j) {
            acc += counts[j];
            out.z[j - 1] = static_cast<double>(acc) / lambda;
        }
        return out;
    }
};

enum class BoundKind { Lower, Upper, Exact };

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Lower: return "lower";
        case BoundKind::Upper: return "upper";
        case BoundKind::Exact: return "exact";
    }
    return "?";
}

/// (m+1) x m matrix of transition bounds. Rows are indexed by the source
/// level i = 0..m, columns by the target superlevel j = 1..m; the conceptual
/// column j = 0 is identically 1 and is not stored. `comparison_tol` is 0 for
/// matrices built from exact rationals and ~1e-12 for float-constructed ones;
/// ordering predicates use it.
class BoundMatrix {
public:
    BoundMatrix() = default;
    BoundMatrix(int m, BoundKind kind, double comparison_tol = 0.0)
        : m_(m), kind_(kind), tol_(comparison_tol), a_(static_cast<std::size_t>(m + 1) * m, 0.0) {
        if (m < 1) throw std::invalid_argument("BoundMatrix: m must be >= 1");
    }

    int m() const { return m_; }
    BoundKind kind() const { return kind_; }
    double comparison_tol() const { return tol_; }
    void set_comparison_tol(double tol) { tol_ = tol; }

    double at(int i, int j) const { return a_[index(i, j)]; }
    double& at(int i, int j) { return a_[index(i, j)]; }

    /// Entries must sit in [0,1]; rows must be non-increasing in j for kind
    /// Exact (H_{j+1} is a subset of H_j). For Lower/Upper the row structure
    /// is reported by validate() but not enforced.
    std::optional<std::pair<int, int>> first_row_violation() const {
        for (int i = 0; i <= m_; ++i)
            for (int j = 1; j < m_; ++j)
                if (at(i, j) + tol_ < at(i, j + 1)) return std::make_pair(i, j);
        return std::nullopt;
    }

    void validate() const {
        for (int i = 0; i <= m_; ++i)
            for (int j = 1; j <= m_; ++j)
                if (at(i, j) < -tol_ || at(i, j) > 1.0 + tol_)
                    throw std::invalid_argument("BoundMatrix: entry outside [0,1]");
        if (kind_ == BoundKind::Exact && first_row_violation())
            throw std::invalid_argument("BoundMatrix: exact matrix must be row-monotone in j");
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i > m_ || j < 1 || j > m_) throw std::out_of_range("BoundMatrix::at");
        return static_cast<std::size_t>(i) * m_ + (j - 1);
    }

    int m_ = 0;
    BoundKind kind_ = BoundKind::Lower;
    double tol_ = 0.0;
    std::vector<double> a_;
};

/// First (i,j) with entry(i-1,j) > entry(i,j), if any.
inline std::optional<std::pair<int, int>> first_monotonicity_violation(const BoundMatrix& mat,
                                                                       double tol) {
    for (int j = 1; j <= mat.m(); ++j)
        for (int i = 1; i <= mat.m(); ++i)
            if (mat.at(i - 1, j) > mat.at(i, j) + tol) return std::make_pair(i, j);
    return std::nullopt;
}

/// True iff entry(i-1,j) <= entry(i,j) for all i,j in 1..m: fitter source
/// levels dominate. Comparison tolerance comes from the matrix itself.
inline bool is_monotone(const BoundMatrix& mat, double tol) {
    return !first_monotonicity_violation(mat, tol).has_value();
}

inline bool is_monotone(const BoundMatrix& mat) { return is_monotone(mat, mat.comparison_tol()); }

/// Probability that an s-tournament winner lies in H_j: 1 - (1 - z_j)^s.
inline double selection_probability(const PopulationVector& z, int s, int j) {
    if (s < 1) throw std::invalid_argument("selection_probability: tournament size must be >= 1");
    if (j < 1 || j > z.m()) throw std::invalid_argument("selection_probability: level out of range");
    return 1.0 - std::pow(1.0 - z.z[j - 1], s);
}

/// Companion per-set form: probability the winner lies exactly in A_i,
/// (1 - z_{i+1})^s - (1 - z_i)^s with z_0 = 1 and z_{m+1} = 0.
inline double selection_probability_level_set(const PopulationVector& z, int s, int i) {
    if (s < 1) throw std::invalid_argument("selection_probability: tournament size must be >= 1");
    if (i < 0 || i > z.m()) throw std::invalid_argument("selection_probability: level out of range");
    const auto zat = [&](int k) { return k == 0 ? 1.0 : (k == z.m() + 1 ? 0.0 : z.z[k - 1]); };
    return std::pow(1.0 - zat(i + 1), s) - std::pow(1.0 - zat(i), s);
}

struct BoundPairReport {
    bool valid_pair = false;      // lower <= upper entrywise
    bool lower_monotone = false;
    bool upper_monotone = false;
    bool level_based = false;     // lower == upper entrywise
    std::optional<std::pair<int, int>> first_violation;  // where lower > upper
};

inline BoundPairReport validate_bound_pair(const BoundMatrix& lower, const BoundMatrix& upper) {
    if (lower.m() != upper.m())
        throw std::invalid_argument("validate_bound_pair: dimension mismatch");
    BoundPairReport rep;
    const double tol = std::max(lower.comparison_tol(), upper.comparison_tol());
    rep.valid_pair = true;
    rep.level_based = true;
    for (int i = 0; i <= lower.m(); ++i) {
        for (int j = 1; j <= lower.m(); ++j) {
            const double lo = lower.at(i, j), hi = upper.at(i, j);
            if (lo > hi + tol) {
                rep.valid_pair = false;
                if (!rep.first_violation) rep.first_violation = std::make_pair(i, j);
            }
            if (std::abs(lo - hi) > tol) rep.level_based = false;
        }
    }
    rep.lower_monotone = is_monotone(lower, tol);
    rep.upper_monotone = is_monotone(upper, tol);
    return rep;
}

namespace detail {
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

/// CSV, row-major: header row `i\j,1,...,m`, then one row per source level.
inline std::string to_csv(const BoundMatrix& mat) {
    std::ostringstream out;
    out << "i\\j";
    for (int j = 1; j <= mat.m(); ++j) out << ',' << j;
    out << '\n';
    for (int i = 0; i <= mat.m(); ++i) {
        out << i;
        for (int j = 1; j <= mat.m(); ++j) out << ',' << detail::format_double(mat.at(i, j));
        out << '\n';
    }
    return out.str();
}

inline BoundMatrix bound_matrix_from_csv(const std::string& text, BoundKind kind,
                                         double comparison_tol = 1e-12) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("bound_matrix_from_csv: empty input");
    int m = -1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ls, cell, ',')) {
            if (first) { first = false; continue; }
            row.push_back(std::stod(cell));
        }
        if (m < 0) m = static_cast<int>(row.size());
        else if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("bound_matrix_from_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (m < 1 || static_cast<int>(rows.size()) != m + 1)
        throw std::invalid_argument("bound_matrix_from_csv: expected (m+1) x m matrix");
    BoundMatrix mat(m, kind, comparison_tol);
    for (int i = 0; i <= m; ++i)
        for (int j = 1; j <= m; ++j) mat.at(i, j) = rows[i][j - 1];
    return mat;
}

/// CSV for a population vector: header `j,1..m`, metadata comment line with
/// the resolution, single data row.
inline std::string to_csv(const PopulationVector& pv) {
    std::ostringstream out;
    out << "j";
    for (int j = 1; j <= pv.m(); ++j) out << ',' << j;
    out << '\n';
    out << "# resolution=" << (pv.lambda ? "exact lambda=" + std::to_string(*pv.lambda) : "expected")
        << '\n';
    out << "z";
    for (const double v : pv.z) out << ',' << detail::format_double(v);
    out << '\n';
    return out.str();
}

inline PopulationVector population_vector_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    PopulationVector pv;
    while (std::getline(in, line)) {
        if (line.rfind("# resolution=exact lambda=", 0) == 0)
            pv.lambda = std::stoi(line.substr(std::string("# resolution=exact lambda=").size()));
        else if (line.rfind("z,", 0) == 0) {
            std::istringstream ls(line.substr(2));
            std::string cell;
            while (std::getline(ls, cell, ',')) pv.z.push_back(std::stod(cell));
        }
    }
    if (pv.z.empty()) throw std::invalid_argument("population_vector_from_csv: no data row");
    return pv;
}

// Key-value blocks in the same sectioned format the command-line configs use.

inline std::string to_config(const BoundMatrix& mat, const std::string& section = "matrix") {
    std::ostringstream out;
    out << '[' << section << "]\n";
    out << "m = " << mat.m() << '\n';
    out << "kind = " << to_string(mat.kind()) << '\n';
    out << "tol = " << detail::format_double(mat.comparison_tol()) << '\n';
    for (int i = 0; i <= mat.m(); ++i) {
        out << "row" << i << " = ";
        for (int j = 1; j <= mat.m(); ++j)
            out << (j > 1 ? "," : "") << detail::format_double(mat.at(i, j));
        out << '\n';
    }
    return out.str();
}

inline std::string to_config(const PopulationVector& pv, const std::string& section = "population") {
    std::ostringstream out;
    out << '[' << section << "]\n";
    out << "resolution = " << (pv.lambda ? "exact" : "expected") << '\n';
    if (pv.lambda) out << "lambda = " << *pv.lambda << '\n';
    out << "z = ";
    for (int j = 1; j <= pv.m(); ++j)
        out << (j > 1 ? "," : "") << detail::format_double(pv.z[j - 1]);
    out << '\n';
    return out.str();
}

}  // namespace levelea
