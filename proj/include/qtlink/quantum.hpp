#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtlink {

using cplx = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr std::size_t kMaxModes = 6;

enum class Domain : std::uint8_t { Microwave, Optical };
enum class Location : std::uint8_t { Source, Midpoint, Destination };

// A mode of the truncated Fock space (occupation 0 or 1). The ordinal
// distinguishes co-located modes of the same domain, e.g. the two microwave
// modes of an EPR pair held at the source before distribution.
struct ModeLabel {
    Domain domain = Domain::Microwave;
    Location location = Location::Source;
    std::uint8_t ordinal = 0;

    friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

// Canonical order: location, then domain, then ordinal. Every state stores
// its labels in this order so tensor indices are deterministic.
inline bool canonical_less(const ModeLabel& a, const ModeLabel& b) {
    if (a.location != b.location) return a.location < b.location;
    if (a.domain != b.domain) return a.domain < b.domain;
    return a.ordinal < b.ordinal;
}

inline std::string to_string(const ModeLabel& label) {
    std::string s = label.domain == Domain::Microwave ? "mw" : "opt";
    s += '@';
    switch (label.location) {
        case Location::Source: s += "src"; break;
        case Location::Midpoint: s += "mid"; break;
        case Location::Destination: s += "dst"; break;
    }
    if (label.ordinal != 0) {
        s += '#';
        s += std::to_string(static_cast<int>(label.ordinal));
    }
    return s;
}

inline ModeLabel parse_mode_label(const std::string& text) {
    auto at = text.find('@');
    if (at == std::string::npos) throw std::invalid_argument("mode label missing '@': " + text);
    ModeLabel label;
    std::string dom = text.substr(0, at);
    if (dom == "mw") label.domain = Domain::Microwave;
    else if (dom == "opt") label.domain = Domain::Optical;
    else throw std::invalid_argument("unknown mode domain: " + dom);
    std::string rest = text.substr(at + 1);
    auto hash = rest.find('#');
    std::string loc = rest.substr(0, hash);
    if (loc == "src") label.location = Location::Source;
    else if (loc == "mid") label.location = Location::Midpoint;
    else if (loc == "dst") label.location = Location::Destination;
    else throw std::invalid_argument("unknown mode location: " + loc);
    if (hash != std::string::npos) {
        int ord = std::stoi(rest.substr(hash + 1));
        if (ord < 0 || ord > 255) throw std::invalid_argument("mode ordinal out of range");
        label.ordinal = static_cast<std::uint8_t>(ord);
    }
    return label;
}

namespace detail {

inline void check_mode_count(std::size_t k) {
    if (k == 0) throw std::invalid_argument("state needs at least one mode");
    if (k > kMaxModes) throw std::invalid_argument("more than " + std::to_string(kMaxModes) + " modes unsupported");
}

// Sorting permutation into canonical label order; throws on duplicates.
inline std::vector<std::size_t> canonical_permutation(const std::vector<ModeLabel>& labels) {
    std::vector<std::size_t> perm(labels.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return canonical_less(labels[a], labels[b]);
    });
    for (std::size_t j = 1; j < perm.size(); ++j) {
        if (labels[perm[j - 1]] == labels[perm[j]]) {
            throw std::invalid_argument("duplicate mode label: " + to_string(labels[perm[j]]));
        }
    }
    return perm;
}

// Maps a basis index over the input label order to the index over the
// canonically sorted order, given the sorting permutation.
inline std::size_t permute_index(std::size_t idx, const std::vector<std::size_t>& perm) {
    const std::size_t k = perm.size();
    std::size_t out = 0;
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t bit = (idx >> (k - 1 - perm[j])) & 1u;
        out |= bit << (k - 1 - j);
    }
    return out;
}

} // namespace detail

// Pure state over a canonically ordered tensor product of two-level modes.
// labels()[0] owns the most significant bit of the basis index. Invariants:
// unique labels, amplitude vector of length exactly 2^k, unit norm within
// kNormTolerance. Immutable after construction.
class PureState {
public:
    PureState(std::vector<ModeLabel> labels, std::vector<cplx> amplitudes)
        : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
        detail::check_mode_count(labels_.size());
        const std::size_t dim = std::size_t{1} << labels_.size();
        if (amplitudes_.size() != dim) {
            throw std::invalid_argument("amplitude vector length must be 2^k");
        }
        auto perm = detail::canonical_permutation(labels_);
        bool sorted = true;
        for (std::size_t j = 0; j < perm.size(); ++j) sorted = sorted && perm[j] == j;
        if (!sorted) {
            std::vector<ModeLabel> sorted_labels(labels_.size());
            std::vector<cplx> sorted_amps(dim);
            for (std::size_t j = 0; j < perm.size(); ++j) sorted_labels[j] = labels_[perm[j]];
            for (std::size_t idx = 0; idx < dim; ++idx) {
                sorted_amps[detail::permute_index(idx, perm)] = amplitudes_[idx];
            }
            labels_ = std::move(sorted_labels);
            amplitudes_ = std::move(sorted_amps);
        }
        double norm2 = 0.0;
        for (const cplx& a : amplitudes_) norm2 += std::norm(a);
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state is not unit-normalized");
        }
    }

    const std::vector<ModeLabel>& labels() const { return labels_; }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    std::size_t mode_count() const { return labels_.size(); }
    std::size_t dim() const { return amplitudes_.size(); }

    bool has_label(const ModeLabel& label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    std::size_t index_of(const ModeLabel& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw std::invalid_argument("unknown mode label: " + to_string(label));
        return static_cast<std::size_t>(it - labels_.begin());
    }

private:
    std::vector<ModeLabel> labels_;
    std::vector<cplx> amplitudes_;
};

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// The four maximally entangled two-mode states, amplitudes +-1/sqrt(2).
inline PureState make_bell(BellKind kind, const ModeLabel& first, const ModeLabel& second) {
    if (first == second) throw std::invalid_argument("label collision: " + to_string(first));
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<cplx> amps(4, cplx{0.0, 0.0});
    switch (kind) {
        case BellKind::PhiPlus:  amps[0b00] = r; amps[0b11] = r;  break;
        case BellKind::PhiMinus: amps[0b00] = r; amps[0b11] = -r; break;
        case BellKind::PsiPlus:  amps[0b01] = r; amps[0b10] = r;  break;
        case BellKind::PsiMinus: amps[0b01] = r; amps[0b10] = -r; break;
    }
    return PureState({first, second}, std::move(amps));
}

// Tensor product; label sets must be disjoint.
inline PureState tensor(const PureState& a, const PureState& b) {
    std::vector<ModeLabel> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
        }
    }
    return PureState(std::move(labels), std::move(amps));
}

namespace detail {

inline void require_unitary(const Eigen::MatrixXcd& u) {
    Eigen::MatrixXcd delta = u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if (delta.cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw std::invalid_argument("matrix is not unitary");
    }
}

} // namespace detail

inline PureState apply_single_mode_gate(const PureState& psi, const ModeLabel& label,
                                        const Eigen::Matrix2cd& u) {
    detail::require_unitary(u);
    const std::size_t pos = psi.index_of(label);
    const std::size_t k = psi.mode_count();
    const std::size_t stride = std::size_t{1} << (k - 1 - pos);
    std::vector<cplx> amps = psi.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (idx & stride) continue;
        const cplx a0 = amps[idx];
        const cplx a1 = amps[idx | stride];
        amps[idx] = u(0, 0) * a0 + u(0, 1) * a1;
        amps[idx | stride] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    return PureState(psi.labels(), std::move(amps));
}

// The 4x4 matrix acts on the ordered pair (first, second); |b_first b_second>
// enumerates the sub-block as 00, 01, 10, 11.
inline PureState apply_two_mode_gate(const PureState& psi, const ModeLabel& first,
                                     const ModeLabel& second, const Eigen::Matrix4cd& u) {
    detail::require_unitary(u);
    if (first == second) throw std::invalid_argument("two-mode gate needs distinct labels");
    const std::size_t k = psi.mode_count();
    const std::size_t sa = std::size_t{1} << (k - 1 - psi.index_of(first));
    const std::size_t sb = std::size_t{1} << (k - 1 - psi.index_of(second));
    std::vector<cplx> amps = psi.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx & sa) || (idx & sb)) continue;
        const std::size_t ix[4] = {idx, idx | sb, idx | sa, idx | sa | sb};
        cplx in[4];
        for (int r = 0; r < 4; ++r) in[r] = amps[ix[r]];
        for (int r = 0; r < 4; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < 4; ++c) acc += u(r, c) * in[c];
            amps[ix[r]] = acc;
        }
    }
    return PureState(psi.labels(), std::move(amps));
}

namespace gates {

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

inline Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

inline Eigen::Matrix2cd hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << r, r, r, -r;
    return m;
}

// Control = first gate mode, target = second.
inline Eigen::Matrix4cd cnot() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

} // namespace gates

// Projects `label` onto |outcome> and removes the mode. Returns the outcome
// probability and the normalized post-measurement state over the remaining
// modes (nullopt when the probability is zero). State must have >= 2 modes.
inline std::pair<double, std::optional<PureState>> project_mode(const PureState& psi,
                                                                const ModeLabel& label,
                                                                int outcome) {
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    if (psi.mode_count() < 2) throw std::invalid_argument("projection needs >= 2 modes");
    const std::size_t k = psi.mode_count();
    const std::size_t pos = psi.index_of(label);
    const std::size_t bit = k - 1 - pos;
    const std::size_t stride = std::size_t{1} << bit;

    double prob = 0.0;
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        if (((idx >> bit) & 1u) == static_cast<std::size_t>(outcome)) prob += std::norm(psi.amplitudes()[idx]);
    }
    if (prob <= 0.0) return {0.0, std::nullopt};

    std::vector<ModeLabel> labels;
    labels.reserve(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
        if (j != pos) labels.push_back(psi.labels()[j]);
    }
    const double scale = 1.0 / std::sqrt(prob);
    std::vector<cplx> amps(psi.dim() / 2);
    for (std::size_t idx = 0; idx < psi.dim(); ++idx) {
        if (((idx >> bit) & 1u) != static_cast<std::size_t>(outcome)) continue;
        const std::size_t low = idx & (stride - 1);
        const std::size_t high = (idx >> (bit + 1)) << bit;
        amps[high | low] = psi.amplitudes()[idx] * scale;
    }
    return {prob, PureState(std::move(labels), std::move(amps))};
}

// Density matrix over canonically ordered modes. Hermitian, trace one,
// positive semidefinite (eigenvalues >= kEigenvalueFloor), all validated at
// construction. Immutable after construction.
class DensityMatrix {
public:
    DensityMatrix(std::vector<ModeLabel> labels, Eigen::MatrixXcd matrix)
        : labels_(std::move(labels)), matrix_(std::move(matrix)) {
        detail::check_mode_count(labels_.size());
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << labels_.size());
        if (matrix_.rows() != dim || matrix_.cols() != dim) {
            throw std::invalid_argument("density matrix must be 2^k x 2^k");
        }
        auto perm = detail::canonical_permutation(labels_);
        bool sorted = true;
        for (std::size_t j = 0; j < perm.size(); ++j) sorted = sorted && perm[j] == j;
        if (!sorted) {
            std::vector<ModeLabel> sorted_labels(labels_.size());
            for (std::size_t j = 0; j < perm.size(); ++j) sorted_labels[j] = labels_[perm[j]];
            Eigen::MatrixXcd permuted(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                const auto pr = static_cast<Eigen::Index>(
                    detail::permute_index(static_cast<std::size_t>(r), perm));
                for (Eigen::Index c = 0; c < dim; ++c) {
                    const auto pc = static_cast<Eigen::Index>(
                        detail::permute_index(static_cast<std::size_t>(c), perm));
                    permuted(pr, pc) = matrix_(r, c);
                }
            }
            labels_ = std::move(sorted_labels);
            matrix_ = std::move(permuted);
        }
        if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
            throw std::invalid_argument("density matrix is not Hermitian");
        }
        if (std::abs(matrix_.trace() - cplx{1.0, 0.0}) > kTraceTolerance) {
            throw std::invalid_argument("density matrix trace must be 1");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < kEigenvalueFloor) {
            throw std::invalid_argument("density matrix is not positive semidefinite");
        }
    }

    static DensityMatrix from_pure(const PureState& psi) {
        const auto dim = static_cast<Eigen::Index>(psi.dim());
        Eigen::VectorXcd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = psi.amplitudes()[static_cast<std::size_t>(i)];
        return DensityMatrix(psi.labels(), v * v.adjoint());
    }

    const std::vector<ModeLabel>& labels() const { return labels_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    std::size_t mode_count() const { return labels_.size(); }

    std::size_t index_of(const ModeLabel& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw std::invalid_argument("unknown mode label: " + to_string(label));
        return static_cast<std::size_t>(it - labels_.begin());
    }

private:
    std::vector<ModeLabel> labels_;
    Eigen::MatrixXcd matrix_;
};

// Reduced density matrix over `keep`; trace preserved. `keep` must be a
// nonempty subset of the state's labels (any order).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<ModeLabel>& keep) {
    if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
    const std::size_t k = rho.mode_count();
    std::vector<bool> kept(k, false);
    for (const ModeLabel& label : keep) {
        std::size_t pos = rho.index_of(label);
        if (kept[pos]) throw std::invalid_argument("duplicate label in keep set: " + to_string(label));
        kept[pos] = true;
    }

    std::vector<std::size_t> keep_pos, trace_pos;
    for (std::size_t j = 0; j < k; ++j) (kept[j] ? keep_pos : trace_pos).push_back(j);

    std::vector<ModeLabel> out_labels;
    out_labels.reserve(keep_pos.size());
    for (std::size_t j : keep_pos) out_labels.push_back(rho.labels()[j]);

    // Scatter a (kept index, traced index) pair into a full basis index.
    auto merge = [&](std::size_t kept_idx, std::size_t traced_idx) {
        std::size_t idx = 0;
        const std::size_t nk = keep_pos.size();
        const std::size_t nt = trace_pos.size();
        for (std::size_t j = 0; j < nk; ++j) {
            idx |= ((kept_idx >> (nk - 1 - j)) & 1u) << (k - 1 - keep_pos[j]);
        }
        for (std::size_t j = 0; j < nt; ++j) {
            idx |= ((traced_idx >> (nt - 1 - j)) & 1u) << (k - 1 - trace_pos[j]);
        }
        return static_cast<Eigen::Index>(idx);
    };

    const std::size_t out_dim = std::size_t{1} << keep_pos.size();
    const std::size_t trace_dim = std::size_t{1} << trace_pos.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(out_dim),
                                                  static_cast<Eigen::Index>(out_dim));
    for (std::size_t r = 0; r < out_dim; ++r) {
        for (std::size_t c = 0; c < out_dim; ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t t = 0; t < trace_dim; ++t) {
                acc += rho.matrix()(merge(r, t), merge(c, t));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityMatrix(std::move(out_labels), std::move(out));
}

// Binary (Shannon) entropy in bits with the endpoint convention
// S(0) = S(1) = 0. Domain error outside [0, 1].
inline double binary_entropy(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("binary_entropy argument outside [0,1]");
    if (eta == 0.0 || eta == 1.0) return 0.0;
    return -eta * std::log2(eta) - (1.0 - eta) * std::log2(1.0 - eta);
}

// Von Neumann entropy in bits; eigenvalues in [kEigenvalueFloor, 0) are
// clamped to zero before the 0*log(0) == 0 convention applies.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double lambda = solver.eigenvalues()(i);
        if (lambda <= 0.0) continue;
        entropy -= lambda * std::log2(lambda);
    }
    return entropy;
}

// Entanglement entropy of a pure state across the given cut, in ebits.
// The cut must be a proper nonempty subset of the state's modes.
inline double entropy_of_entanglement(const PureState& psi, const std::vector<ModeLabel>& cut) {
    if (cut.empty()) throw std::invalid_argument("cut must be nonempty");
    if (cut.size() >= psi.mode_count()) throw std::invalid_argument("cut must be a proper subset of the modes");
    return von_neumann_entropy(partial_trace(DensityMatrix::from_pure(psi), cut));
}

// |<a|b>|^2. Requires identical label sets.
inline double fidelity(const PureState& a, const PureState& b) {
    if (a.labels() != b.labels()) throw std::invalid_argument("fidelity requires identical label sets");
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        overlap += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return std::norm(overlap);
}

} // namespace qtlink
