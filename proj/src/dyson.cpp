#include "qboltz/dyson.hpp"

#include <cmath>
#include <functional>

namespace qboltz {

const ExactComplex& InteractionSpec::coupling(const Rational& omega, std::uint32_t momentum) const {
    static const ExactComplex zero(0);
    auto it = couplings.find({omega, momentum});
    return it == couplings.end() ? zero : it->second;
}

namespace {

void require_grid_point(const LabelSpace& labels, const InteractionSpec& spec, std::uint32_t time) {
    if (time >= spec.points || time >= labels.times().size())
        throw Error(ErrorCode::UnknownLabel, "time index " + std::to_string(time) + " is not a grid point");
}

// (−i Δt)^n as an exact scalar.
ExactComplex step_factor(const Rational& dt, int n) {
    ExactComplex factor(1);
    const ExactComplex step{Rational(0), Rational(-dt)};
    for (int i = 0; i < n; ++i) factor *= step;
    return factor;
}

}  // namespace

Polynomial hamiltonian_at(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec,
                          std::uint32_t time) {
    require_grid_point(labels, spec, time);
    Polynomial h = Polynomial::zero(system.dimension());
    for (const auto& omega : system.frequencies()) {
        for (std::uint32_t k = 0; k < labels.momenta().size(); ++k) {
            const ExactComplex& g = spec.coupling(omega, k);
            if (g.is_zero()) continue;
            const NoiseLabel label{omega, time, k};
            h += entangled_annihilate(system, labels, label) * ScalarExpr{conj(g), 0};
            h += entangled_create(system, labels, label) * ScalarExpr{g, 0};
        }
    }
    return h;
}

std::vector<std::vector<std::uint32_t>> ordered_time_tuples(std::size_t t_end, int n) {
    std::vector<std::vector<std::uint32_t>> out;
    if (n < 0) return out;
    std::vector<std::uint32_t> tuple;
    std::function<void(std::int64_t)> recurse = [&](std::int64_t upper) {
        if (static_cast<int>(tuple.size()) == n) {
            out.push_back(tuple);
            return;
        }
        for (std::int64_t t = upper; t >= 0; --t) {
            tuple.push_back(static_cast<std::uint32_t>(t));
            recurse(t - 1);
            tuple.pop_back();
        }
    };
    recurse(static_cast<std::int64_t>(t_end));
    return out;
}

Polynomial dyson_term(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec, int n,
                      std::uint32_t t_end, const DysonOptions& options) {
    if (n < 0) throw Error(ErrorCode::MalformedInput, "Dyson order must be non-negative");
    require_grid_point(labels, spec, t_end);
    if (n == 0) return Polynomial::identity(system.dimension());

    std::vector<Polynomial> h;
    for (std::uint32_t t = 0; t <= t_end; ++t) h.push_back(hamiltonian_at(system, labels, spec, t));
    const auto tuples = ordered_time_tuples(t_end, n);

    double estimate = static_cast<double>(tuples.size());
    for (int i = 0; i < n; ++i) estimate *= static_cast<double>(std::max<std::size_t>(1, h.front().size()));
    if (estimate > static_cast<double>(options.max_terms))
        throw Error(ErrorCode::OrderTooLarge, "Dyson order " + std::to_string(n) + " needs ~" +
                                                  std::to_string(static_cast<long long>(estimate)) + " products");

    Polynomial sum = Polynomial::zero(system.dimension());
    for (const auto& tuple : tuples) {
        Polynomial product = h[tuple.front()];
        for (std::size_t i = 1; i < tuple.size(); ++i) product = multiply(product, h[tuple[i]]);
        sum += product;
    }
    return sum * ScalarExpr{step_factor(spec.dt, n), 0};
}

bool depends_only_on_entangled(const GenericSystem& system, const Polynomial& p) {
    const auto d = static_cast<Eigen::Index>(system.dimension());
    for (const auto& [key, m] : p.raw_terms()) {
        ExactMatrix expected = ExactMatrix::Identity(d, d);
        for (const NoiseFactor& f : key.first) {
            if (!system.has_frequency(f.label.omega)) return false;
            expected = exact_product(expected, f.kind == NoiseKind::Annihilator
                                                   ? sigma_plus<ExactComplex>(system, f.label.omega)
                                                   : sigma_minus<ExactComplex>(system, f.label.omega));
        }
        if (!scalar_multiple_of(m, expected)) return false;
    }
    return true;
}

bool depends_only_on_entangled(const GenericSystem& system, const LabelSpace& labels, const InteractionSpec& spec,
                               int n_max) {
    if (spec.points == 0) return true;
    const auto t_end = static_cast<std::uint32_t>(spec.points - 1);
    for (int n = 0; n <= n_max; ++n)
        if (!depends_only_on_entangled(system, dyson_term(system, labels, spec, n, t_end))) return false;
    return true;
}

namespace {

std::vector<SparseComplexMatrix> oracle_hamiltonians(const OracleRep& rep, const InteractionSpec& spec,
                                                     std::uint32_t t_end) {
    std::vector<SparseComplexMatrix> out;
    const auto dim = static_cast<Eigen::Index>(rep.dimension());
    for (std::uint32_t t = 0; t <= t_end; ++t) {
        SparseComplexMatrix h(dim, dim);
        for (const auto& mode : rep.fock().modes) {
            if (mode.time != t) continue;
            const std::complex<double> g = to_complex(spec.coupling(mode.omega, mode.momentum));
            if (g == 0.0) continue;
            h += std::conj(g) * rep.annihilator(mode) + g * rep.creator(mode);
        }
        out.push_back(std::move(h));
    }
    return out;
}

ComplexVector apply_dyson(const std::vector<SparseComplexMatrix>& h, const InteractionSpec& spec, int n,
                          std::uint32_t t_end, const ComplexVector& v) {
    ComplexVector sum = ComplexVector::Zero(v.size());
    for (const auto& tuple : ordered_time_tuples(t_end, n)) {
        ComplexVector w = v;
        for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) w = h[*it] * w;
        sum += w;
    }
    const std::complex<double> step(0.0, -spec.dt.get_d());
    return std::pow(step, n) * sum;
}

ComplexVector embed_vacuum(const OracleRep& rep, const ComplexVector& psi) {
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(rep.dimension()));
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        out(static_cast<Eigen::Index>(rep.vacuum_index(static_cast<std::size_t>(i)))) = psi(i);
    return out;
}

// The symbolic state in oracle coordinates: b*_{L1}…b*_{Ln}|0⟩ ↦ Π_m (2π)^{n_m/2} √(n_m!) |n⟩.
ComplexVector to_oracle_basis(const FockState& state, const OracleRep& rep, const LabelSpace& labels,
                              const ComplexVector& psi) {
    const std::size_t n_modes = rep.fock().modes.size();
    const auto levels = static_cast<std::size_t>(rep.cutoff()) + 1;
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(rep.dimension()));
    for (const auto& [key, m] : state.terms()) {
        std::vector<int> occupation(n_modes, 0);
        bool null_vector = false;
        for (const auto& label : key.first) {
            auto idx = rep.mode_index(label);
            if (!idx || !labels.on_shell(label)) {
                null_vector = true;
                break;
            }
            ++occupation[*idx];
        }
        if (null_vector) continue;
        double weight = std::pow(kTwoPi, key.second);
        std::size_t fock_index = 0;
        for (std::size_t mode = 0; mode < n_modes; ++mode) {
            const int k = occupation[mode];
            if (k > rep.cutoff())
                throw Error(ErrorCode::BadCutoff, "propagated state exceeds the oracle cutoff " +
                                                      std::to_string(rep.cutoff()));
            weight *= std::pow(kTwoPi, 0.5 * k) * std::sqrt(std::tgamma(k + 1.0));
            fock_index = fock_index * levels + static_cast<std::size_t>(k);
        }
        const ComplexVector component = to_numeric(m) * psi;
        for (Eigen::Index i = 0; i < component.size(); ++i)
            out(static_cast<Eigen::Index>(rep.vacuum_index(static_cast<std::size_t>(i)) + fock_index)) +=
                weight * component(i);
    }
    return out;
}

}  // namespace

ComplexMatrix oracle_dyson_vacuum_block(const OracleRep& rep, const LabelSpace& labels, const InteractionSpec& spec,
                                        int n, std::uint32_t t_end) {
    require_grid_point(labels, spec, t_end);
    const auto h = oracle_hamiltonians(rep, spec, t_end);
    const auto d = static_cast<Eigen::Index>(rep.system_dimension());
    ComplexMatrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        ComplexVector w = apply_dyson(h, spec, n, t_end, rep.vacuum_vector(static_cast<std::size_t>(j)));
        for (Eigen::Index i = 0; i < d; ++i)
            out(i, j) = w(static_cast<Eigen::Index>(rep.vacuum_index(static_cast<std::size_t>(i))));
    }
    return out;
}

std::vector<PropagatorOrder> propagator_matrix_elements(const GenericSystem& system, const LabelSpace& labels,
                                                        const InteractionSpec& spec, const ComplexVector& bra,
                                                        const ComplexVector& ket, int n_max, int cutoff,
                                                        std::size_t max_dimension) {
    if (static_cast<std::size_t>(bra.size()) != system.dimension() ||
        static_cast<std::size_t>(ket.size()) != system.dimension())
        throw Error(ErrorCode::DimensionMismatch, "system states have the wrong dimension");
    if (spec.points == 0) throw Error(ErrorCode::MalformedInput, "time grid is empty");
    const auto t_end = static_cast<std::uint32_t>(spec.points - 1);
    OracleRep rep = build_oracle(system, labels, cutoff, {}, max_dimension);
    const auto h = oracle_hamiltonians(rep, spec, t_end);
    const ComplexVector start = embed_vacuum(rep, ket);

    std::vector<PropagatorOrder> out;
    for (int n = 0; n <= n_max; ++n) {
        PropagatorOrder order;
        order.order = n;
        const Polynomial term = dyson_term(system, labels, spec, n, t_end);
        order.symbolic_operator = vacuum_expectation(term, labels);
        const FockState propagated = act(term, FockState::vacuum(system.dimension()), labels);
        order.state_deviation = (to_oracle_basis(propagated, rep, labels, ket) - apply_dyson(h, spec, n, t_end, start))
                                    .cwiseAbs()
                                    .maxCoeff();
        order.oracle_operator = oracle_dyson_vacuum_block(rep, labels, spec, n, t_end);
        order.symbolic = order.symbolic_operator.sandwich(bra, ket);
        order.oracle = bra.dot(order.oracle_operator * ket);
        order.deviation = std::max((order.symbolic_operator.evaluate() - order.oracle_operator).cwiseAbs().maxCoeff(),
                                   std::abs(order.symbolic - order.oracle));
        out.push_back(std::move(order));
    }
    return out;
}

double unitarity_defect(const OracleRep& rep, const InteractionSpec& spec,
                        const ComplexVector& psi, int n_max) {
    if (spec.points == 0) return 0.0;
    const auto t_end = static_cast<std::uint32_t>(spec.points - 1);
    const auto h = oracle_hamiltonians(rep, spec, t_end);
    const ComplexVector start = embed_vacuum(rep, psi);
    ComplexVector total = ComplexVector::Zero(start.size());
    for (int n = 0; n <= n_max; ++n) total += apply_dyson(h, spec, n, t_end, start);
    return total.squaredNorm() - 1.0;
}

}  // namespace qboltz
