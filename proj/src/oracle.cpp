#include "qboltz/oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qboltz {

namespace {

using ColSparse = Eigen::SparseMatrix<std::complex<double>>;

ColSparse sparse_identity(std::size_t n) {
    ColSparse id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    id.setIdentity();
    return id;
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t limit) {
    std::size_t value = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (value > limit / base) return std::numeric_limits<std::size_t>::max();
        value *= base;
    }
    return value;
}

}  // namespace

std::optional<std::size_t> OracleRep::mode_index(const NoiseLabel& label) const {
    const auto& modes = fock_.modes;
    auto it = std::lower_bound(modes.begin(), modes.end(), label);
    if (it == modes.end() || !(*it == label)) return std::nullopt;
    return static_cast<std::size_t>(it - modes.begin());
}

const SparseComplexMatrix& OracleRep::annihilator(const NoiseLabel& label) const {
    auto m = mode_index(label);
    return m ? annihilators_[*m] : zero_;
}

const SparseComplexMatrix& OracleRep::creator(const NoiseLabel& label) const {
    auto m = mode_index(label);
    return m ? creators_[*m] : zero_;
}

SparseComplexMatrix OracleRep::projector(const Rational& omega) const {
    auto it = sigma_plus_.find(omega);
    if (it == sigma_plus_.end())
        throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not represented");
    ComplexMatrix p = it->second * it->second.adjoint();
    ColSparse ps = p.sparseView();
    ColSparse full = Eigen::kroneckerProduct(ps, sparse_identity(fock_.fock_dimension));
    return SparseComplexMatrix(full);
}

ComplexVector OracleRep::vacuum_vector(std::size_t system_index) const {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension()));
    v(static_cast<Eigen::Index>(vacuum_index(system_index))) = 1.0;
    return v;
}

std::vector<int> OracleRep::occupations(std::size_t fock_index) const {
    const std::size_t base = static_cast<std::size_t>(fock_.cutoff) + 1;
    std::vector<int> occ(fock_.modes.size());
    for (std::size_t m = fock_.modes.size(); m-- > 0;) {
        occ[m] = static_cast<int>(fock_index % base);
        fock_index /= base;
    }
    return occ;
}

OracleRep build_oracle(const GenericSystem& system, const LabelSpace& labels, int cutoff,
                       const std::vector<Rational>& omegas, std::size_t max_dimension) {
    if (cutoff < 1) throw Error(ErrorCode::BadCutoff, "N_max must be at least 1, got " + std::to_string(cutoff));
    std::vector<Rational> freqs = omegas.empty() ? system.frequencies() : omegas;
    for (const auto& omega : freqs)
        if (!system.has_frequency(omega))
            throw Error(ErrorCode::UnknownFrequency, "omega = " + omega.get_str() + " is not a Bohr frequency");

    OracleRep rep;
    rep.system_dimension_ = system.dimension();
    rep.fock_.cutoff = cutoff;
    for (const auto& label : labels.all_labels(freqs))
        if (labels.on_shell(label)) rep.fock_.modes.push_back(label);
    rep.fock_.modes.erase(std::unique(rep.fock_.modes.begin(), rep.fock_.modes.end()), rep.fock_.modes.end());

    const std::size_t levels = static_cast<std::size_t>(cutoff) + 1;
    const std::size_t n_modes = rep.fock_.modes.size();
    const std::size_t fock_dim = checked_power(levels, n_modes, max_dimension);
    const bool overflow = fock_dim == std::numeric_limits<std::size_t>::max() ||
                          fock_dim > max_dimension / std::max<std::size_t>(1, system.dimension());
    if (overflow) {
        const double estimate = static_cast<double>(system.dimension()) *
                                std::pow(static_cast<double>(levels), static_cast<double>(n_modes));
        std::ostringstream msg;
        msg << std::setprecision(17) << "oracle dimension " << estimate << " exceeds bound " << max_dimension;
        throw Error(ErrorCode::CapacityExceeded, msg.str());
    }
    rep.fock_.fock_dimension = fock_dim;

    for (const auto& omega : freqs) rep.sigma_plus_.emplace(omega, sigma_plus<std::complex<double>>(system, omega));

    rep.ladder_ = ComplexMatrix::Zero(static_cast<Eigen::Index>(levels), static_cast<Eigen::Index>(levels));
    for (std::size_t n = 1; n < levels; ++n)
        rep.ladder_(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) =
            std::sqrt(kTwoPi * static_cast<double>(n));
    const ColSparse ladder = rep.ladder_.sparseView();

    const auto total = static_cast<Eigen::Index>(rep.dimension());
    rep.zero_ = SparseComplexMatrix(total, total);

    for (std::size_t m = 0; m < n_modes; ++m) {
        const std::size_t before = checked_power(levels, m, fock_dim);
        const std::size_t after = checked_power(levels, n_modes - 1 - m, fock_dim);
        ColSparse left = Eigen::kroneckerProduct(sparse_identity(before), ladder);
        ColSparse field = Eigen::kroneckerProduct(left, sparse_identity(after));

        // [b, b*] = 2π on states whose occupation of this mode is below the cutoff.
        ColSparse field_dag = field.adjoint();
        ColSparse comm = field * field_dag - field_dag * field;
        for (Eigen::Index col = 0; col < comm.outerSize(); ++col) {
            for (ColSparse::InnerIterator it(comm, col); it; ++it) {
                const auto row = static_cast<std::size_t>(it.row());
                if (rep.occupations(row)[m] >= cutoff) continue;
                const double expected = it.row() == it.col() ? kTwoPi : 0.0;
                rep.commutator_deviation_ = std::max(rep.commutator_deviation_, std::abs(it.value() - expected));
            }
        }
        for (std::size_t f = 0; f < fock_dim; ++f) {
            if (rep.occupations(f)[m] >= cutoff) continue;
            const auto idx = static_cast<Eigen::Index>(f);
            if (comm.coeff(idx, idx) == std::complex<double>(0.0))
                rep.commutator_deviation_ = std::max(rep.commutator_deviation_, kTwoPi);
        }
        if (rep.commutator_deviation_ > kConstructionTolerance)
            throw std::logic_error("oracle ladder construction violates [b, b*] = 2π");

        const ColSparse sp = rep.sigma_plus_.at(rep.fock_.modes[m].omega).sparseView();
        ColSparse c = Eigen::kroneckerProduct(sp, field);
        ColSparse c_dag = c.adjoint();
        rep.annihilators_.emplace_back(c);
        rep.creators_.emplace_back(c_dag);
    }
    return rep;
}

std::vector<BasisVector> entangled_basis(const OracleRep& rep, int max_order) {
    const auto& modes = rep.fock().modes;
    if (max_order < 0 || static_cast<std::size_t>(max_order) > static_cast<std::size_t>(rep.cutoff()) * modes.size())
        throw Error(ErrorCode::OrderTooLarge,
                    "order " + std::to_string(max_order) + " exceeds N_max·#modes = " +
                        std::to_string(static_cast<std::size_t>(rep.cutoff()) * modes.size()));
    std::vector<BasisVector> out;
    for (std::size_t i = 0; i < rep.system_dimension(); ++i) {
        std::vector<NoiseLabel> creators;
        std::function<void(const ComplexVector&, int)> recurse = [&](const ComplexVector& v, int order) {
            const bool zero = v.squaredNorm() == 0.0;
            out.push_back({i, creators, v, zero});
            if (order == max_order) return;
            for (const auto& mode : modes) {
                ComplexVector next = rep.creator(mode) * v;
                creators.insert(creators.begin(), mode);
                recurse(next, order + 1);
                creators.erase(creators.begin());
            }
        };
        recurse(rep.vacuum_vector(i), 0);
    }
    return out;
}

Report oracle_check_relation(const OracleRep& rep, const LabelSpace& labels, int max_order, double tol) {
    Report report;
    report.check = "oracle_relation";
    const auto& modes = rep.fock().modes;
    const auto basis = entangled_basis(rep, max_order);

    std::map<Rational, SparseComplexMatrix> projectors;
    for (const auto& mode : modes)
        if (!projectors.contains(mode.omega)) projectors.emplace(mode.omega, rep.projector(mode.omega));

    std::uint64_t zero_vectors = 0, checks = 0, skipped = 0;
    double max_residual = 0.0;
    for (const auto& b : basis) {
        if (b.zero) {
            ++zero_vectors;
            continue;
        }
        const double norm = b.vector.norm();
        for (const auto& created : modes) {
            const auto occupation = std::count(b.creators.begin(), b.creators.end(), created);
            if (occupation >= rep.cutoff()) {
                ++skipped;
                continue;
            }
            const ComplexVector w = rep.creator(created) * b.vector;
            for (const auto& annihilated : modes) {
                ++checks;
                ComplexVector r = rep.annihilator(annihilated) * w;
                if (annihilated == created) r -= kTwoPi * (projectors.at(annihilated.omega) * b.vector);
                const double residual = r.norm() / norm;
                max_residual = std::max(max_residual, residual);
                if (residual > tol) {
                    std::string vec;
                    for (const auto& l : b.creators) vec += "c*" + labels.describe(l) + " ";
                    report.add_violation({{"annihilated", labels.describe(annihilated)},
                                          {"created", labels.describe(created)},
                                          {"vector", vec + "e" + std::to_string(b.system_index)},
                                          {"relative_residual", residual}});
                }
            }
        }
    }
    report.parameters["max_order"] = max_order;
    report.parameters["cutoff"] = rep.cutoff();
    report.parameters["modes"] = modes.size();
    report.parameters["dimension"] = rep.dimension();
    report.parameters["tolerance"] = tol;
    report.counts["basis_vectors"] = basis.size();
    report.counts["zero_vectors"] = zero_vectors;
    report.counts["relation_checks"] = checks;
    report.counts["skipped_at_cutoff"] = skipped;
    report.max_deviation = max_residual;
    return report;
}

Report oracle_check_c_squared(const OracleRep& rep, const LabelSpace& labels, double tol) {
    Report report;
    report.check = "oracle_c_squared";
    double worst = 0.0;
    for (const auto& mode : rep.fock().modes) {
        for (bool creator : {false, true}) {
            const SparseComplexMatrix& c = creator ? rep.creator(mode) : rep.annihilator(mode);
            const double norm = SparseComplexMatrix(c * c).norm();
            worst = std::max(worst, norm);
            if (norm > tol)
                report.add_violation({{"label", labels.describe(mode)}, {"creator", creator}, {"norm", norm}});
        }
    }
    report.parameters["cutoff"] = rep.cutoff();
    report.parameters["dimension"] = rep.dimension();
    report.parameters["tolerance"] = tol;
    report.counts["operators_checked"] = 2 * rep.fock().modes.size();
    report.max_deviation = worst;
    return report;
}

ComplexMatrix oracle_vacuum_moment(const OracleRep& rep, const EntangledWord& word) {
    const std::size_t bound = 2 * static_cast<std::size_t>(rep.cutoff()) * rep.fock().modes.size();
    if (word.size() > bound)
        throw Error(ErrorCode::OrderTooLarge,
                    "word length " + std::to_string(word.size()) + " exceeds 2·N_max·#modes = " + std::to_string(bound));
    const auto d = static_cast<Eigen::Index>(rep.system_dimension());
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        ComplexVector v = rep.vacuum_vector(static_cast<std::size_t>(j));
        for (auto it = word.rbegin(); it != word.rend(); ++it) v = rep.letter(*it) * v;
        for (Eigen::Index i = 0; i < d; ++i)
            out(i, j) = v(static_cast<Eigen::Index>(rep.vacuum_index(static_cast<std::size_t>(i))));
    }
    return out;
}

std::vector<MomentReport> cross_validate(const GenericSystem& system, const LabelSpace& labels,
                                         const std::vector<EntangledWord>& words,
                                         const CrossValidationOptions& options) {
    std::vector<MomentReport> out;
    if (words.empty()) return out;
    OracleRep rep = build_oracle(system, labels, options.cutoff, options.omegas, options.max_dimension);
    out.reserve(words.size());
    for (const auto& word : words) {
        MomentReport r;
        r.word = describe(word, labels);
        r.symbolic = vacuum_expectation(word_polynomial(system, labels, word), labels, options.rule);
        r.oracle = oracle_vacuum_moment(rep, word);
        r.deviation = (r.symbolic.evaluate() - r.oracle).cwiseAbs().maxCoeff();
        out.push_back(std::move(r));
    }
    return out;
}

Report summarize(const std::vector<MomentReport>& reports, double tol) {
    Report report;
    report.check = "cross_validate";
    report.parameters["tolerance"] = tol;
    std::uint64_t nonzero = 0;
    for (const auto& r : reports) {
        report.max_deviation = std::max(report.max_deviation, r.deviation);
        if (!r.symbolic.is_zero()) ++nonzero;
        if (r.deviation > tol)
            report.add_violation({{"word", r.word}, {"symbolic", r.symbolic.to_string()}, {"deviation", r.deviation}});
    }
    report.counts["words"] = reports.size();
    report.counts["symbolic_nonzero"] = nonzero;
    return report;
}

namespace {

void write_f32_le(std::ostream& os, float value) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &value, sizeof bits);
    const char bytes[4] = {static_cast<char>(bits & 0xffu), static_cast<char>((bits >> 8) & 0xffu),
                           static_cast<char>((bits >> 16) & 0xffu), static_cast<char>((bits >> 24) & 0xffu)};
    os.write(bytes, 4);
}

void write_dense(const std::filesystem::path& path, const SparseComplexMatrix& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::MalformedInput, "cannot write " + path.string());
    const ComplexMatrix dense(m);
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j) {
            write_f32_le(os, static_cast<float>(dense(i, j).real()));
            write_f32_le(os, static_cast<float>(dense(i, j).imag()));
        }
}

}  // namespace

void dump_oracle(const OracleRep& rep, const LabelSpace& labels, const std::string& directory,
                 std::size_t max_dense_dimension) {
    if (rep.dimension() > max_dense_dimension)
        throw Error(ErrorCode::CapacityExceeded, "dense dump of dimension " + std::to_string(rep.dimension()) +
                                                     " exceeds bound " + std::to_string(max_dense_dimension));
    const std::filesystem::path dir(directory);
    std::filesystem::create_directories(dir);
    nlohmann::json header;
    header["layout"] = "row-major, little-endian complex64 (float32 real, float32 imag)";
    header["system_dimension"] = rep.system_dimension();
    header["fock_dimension"] = rep.fock().fock_dimension;
    header["dimension"] = rep.dimension();
    header["cutoff"] = rep.cutoff();
    header["basis"] = "index = system_index * fock_dimension + sum_m n_m * (cutoff+1)^(modes-1-m)";
    nlohmann::json modes = nlohmann::json::array();
    nlohmann::json matrices = nlohmann::json::array();
    for (std::size_t m = 0; m < rep.fock().modes.size(); ++m) {
        const auto& mode = rep.fock().modes[m];
        modes.push_back(labels.describe(mode));
        const std::string c_file = "c_" + std::to_string(m) + ".bin";
        const std::string cdag_file = "cdag_" + std::to_string(m) + ".bin";
        write_dense(dir / c_file, rep.annihilator(mode));
        write_dense(dir / cdag_file, rep.creator(mode));
        matrices.push_back({{"mode", m}, {"operator", "c"}, {"file", c_file}});
        matrices.push_back({{"mode", m}, {"operator", "c*"}, {"file", cdag_file}});
    }
    header["modes"] = modes;
    header["matrices"] = matrices;
    std::ofstream os(dir / "header.json");
    os << header.dump(2) << '\n';
}

}  // namespace qboltz
