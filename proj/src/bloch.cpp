#include "cqed/bloch.hpp"

#include <cmath>

namespace cqed {

namespace {

constexpr Complex I{0.0, 1.0};

// Row-by-row transcription of the literal equations of motion. Each call
// add(m, n, c, p, q) contributes c * sigma_pq to d sigma_mn / dt.
class EquationTable {
public:
    struct Row {
        int equation;
        int m;
        int n;
    };

    void add(int m, int n, Complex c, int p, int q)
    {
        matrix_(state_index(m, n), state_index(p, q)) += c;
    }

    void declare(int equation, int m, int n) { rows_.push_back({equation, m, n}); }

    // Rows not written out are the complex conjugates of the declared
    // off-diagonal ones: d sigma_nm/dt = conj(d sigma_mn/dt).
    SuperMatrix complete() const
    {
        SuperMatrix out = matrix_;
        for (const auto& r : rows_) {
            if (r.m == r.n) continue;
            const int src = state_index(r.m, r.n);
            const int dst = state_index(r.n, r.m);
            out.row(dst).setZero();
            for (int p = 1; p <= kLevels; ++p)
                for (int q = 1; q <= kLevels; ++q)
                    out(dst, state_index(q, p)) = std::conj(matrix_(src, state_index(p, q)));
        }
        return out;
    }

    const std::vector<Row>& rows() const { return rows_; }

private:
    SuperMatrix matrix_ = SuperMatrix::Zero();
    std::vector<Row> rows_;
};

EquationTable printed_scheme_a(const SystemConfig& c, Real x)
{
    const auto& s = c.scheme;
    const Complex o1 = c.weight(2) * x;
    const Complex o2 = c.weight(3) * x;
    const Complex oc = c.omega_c;
    const Real g2 = s.gamma_2, g3 = s.gamma_3, g4 = s.gamma_4;
    const Real dp = c.delta_p, d23 = s.delta_23, dc = c.delta_control;
    const auto cj = [](Complex z) { return std::conj(z); };

    EquationTable t;
    t.declare(2, 1, 1);
    t.add(1, 1, g2, 2, 2);
    t.add(1, 1, g3, 3, 3);
    t.add(1, 1, g4, 4, 4);
    t.add(1, 1, I * cj(o1), 2, 1);
    t.add(1, 1, -I * o1, 1, 2);
    t.add(1, 1, I * cj(o2), 3, 1);
    t.add(1, 1, -I * o2, 1, 3);

    // The operator symbols in the printed (3)-(4) are read as the c-number
    // Rabi frequencies.
    t.declare(3, 2, 2);
    t.add(2, 2, -g2, 2, 2);
    t.add(2, 2, I * o1, 1, 2);
    t.add(2, 2, -I * cj(o1), 2, 1);

    t.declare(4, 3, 3);
    t.add(3, 3, -g3, 3, 3);
    t.add(3, 3, I * o2, 1, 3);
    t.add(3, 3, -I * cj(o2), 3, 1);
    t.add(3, 3, I * oc, 4, 3);
    t.add(3, 3, -I * cj(oc), 3, 4);

    t.declare(5, 4, 4);
    t.add(4, 4, g4, 2, 2);
    t.add(4, 4, g4, 3, 3);
    t.add(4, 4, -g4, 4, 4);
    t.add(4, 4, I * cj(oc), 3, 4);
    t.add(4, 4, -I * oc, 4, 3);

    t.declare(6, 2, 3);
    t.add(2, 3, -((g2 + g3) / 2 - I * d23), 2, 3);
    t.add(2, 3, I * o1, 1, 3);
    t.add(2, 3, -I * cj(o2), 2, 1);
    t.add(2, 3, -I * cj(oc), 2, 4);

    t.declare(7, 4, 2);
    t.add(4, 2, -(g2 / 2 + I * (dc - dp)), 4, 2);
    t.add(4, 2, -I * cj(o1), 4, 1);
    t.add(4, 2, I * cj(oc), 3, 2);

    t.declare(8, 4, 3);
    t.add(4, 3, -(g3 / 2 + I * dc), 4, 3);
    t.add(4, 3, I * cj(oc), 3, 3);
    t.add(4, 3, -I * cj(oc), 4, 4);
    t.add(4, 3, -I * cj(o2), 4, 1);

    t.declare(9, 1, 2);
    t.add(1, 2, -(g2 / 2 + I * (dp + d23)), 1, 2);
    t.add(1, 2, I * cj(o1), 2, 2);
    t.add(1, 2, -I * cj(o1), 1, 1);
    t.add(1, 2, I * cj(o2), 3, 2);

    t.declare(10, 1, 3);
    t.add(1, 3, -(g3 / 2 + I * dp), 1, 3);
    t.add(1, 3, I * cj(o2), 3, 3);
    t.add(1, 3, -I * cj(o2), 1, 1);
    t.add(1, 3, I * cj(o1), 2, 3);
    t.add(1, 3, -I * cj(oc), 1, 4);

    t.declare(11, 1, 4);
    t.add(1, 4, -(g4 / 2 + I * (dc - dp)), 1, 4);
    t.add(1, 4, I * cj(o1), 2, 4);
    t.add(1, 4, I * cj(o2), 3, 4);
    t.add(1, 4, -I * oc, 1, 3);
    return t;
}

EquationTable printed_scheme_b(const SystemConfig& c, Real x)
{
    const auto& s = c.scheme;
    // o[k] drives 1 -> k+2
    const Complex o[3] = {c.weight(2) * x, c.weight(3) * x, c.weight(4) * x};
    const Real g[3] = {s.gamma_2, s.gamma_3, s.gamma_4};
    const Real dp = c.delta_p;
    const Real d23 = s.delta_23, d34 = s.delta_34, d24 = s.delta_24();
    const auto cj = [](Complex z) { return std::conj(z); };

    EquationTable t;
    t.declare(17, 1, 1);
    for (int k = 0; k < 3; ++k) {
        const int lvl = k + 2;
        t.add(1, 1, g[k], lvl, lvl);
        t.add(1, 1, I * o[k], lvl, 1);
        t.add(1, 1, -I * cj(o[k]), 1, lvl);
    }
    for (int k = 0; k < 3; ++k) {
        const int lvl = k + 2;
        t.declare(18 + k, lvl, lvl);
        t.add(lvl, lvl, -g[k], lvl, lvl);
        t.add(lvl, lvl, -I * o[k], lvl, 1);
        t.add(lvl, lvl, I * cj(o[k]), 1, lvl);
    }

    t.declare(21, 1, 2);
    t.add(1, 2, -(g[0] / 2 + I * (dp + d24)), 1, 2);
    t.add(1, 2, I * cj(o[0]), 2, 2);
    t.add(1, 2, -I * cj(o[0]), 1, 1);
    t.add(1, 2, I * cj(o[1]), 3, 2);
    t.add(1, 2, I * cj(o[2]), 4, 2);

    t.declare(22, 1, 3);
    t.add(1, 3, -(g[1] / 2 + I * (dp + d34)), 1, 3);
    t.add(1, 3, I * cj(o[1]), 3, 3);
    t.add(1, 3, -I * cj(o[1]), 1, 1);
    t.add(1, 3, I * cj(o[0]), 3, 2);
    t.add(1, 3, I * cj(o[2]), 4, 3);

    t.declare(23, 1, 4);
    t.add(1, 4, -(g[2] / 2 + I * dp), 1, 4);
    t.add(1, 4, I * cj(o[2]), 4, 4);
    t.add(1, 4, -I * cj(o[2]), 1, 1);
    t.add(1, 4, I * cj(o[0]), 2, 4);
    t.add(1, 4, I * cj(o[1]), 3, 4);

    // Decay terms of (24)-(26) kept with the printed sign and factor 2.
    t.declare(24, 2, 3);
    t.add(2, 3, (g[0] + g[1]) / 2 - 2.0 * I * d23, 2, 3);
    t.add(2, 3, I * cj(o[0]), 1, 3);
    t.add(2, 3, -I * o[1], 2, 1);

    t.declare(25, 3, 4);
    t.add(3, 4, (g[1] + g[2]) / 2 - 2.0 * I * d34, 3, 4);
    t.add(3, 4, I * cj(o[1]), 1, 4);
    t.add(3, 4, -I * o[2], 3, 1);

    t.declare(26, 2, 4);
    t.add(2, 4, (g[0] + g[2]) / 2 - 2.0 * I * d24, 2, 4);
    t.add(2, 4, I * cj(o[0]), 1, 4);
    t.add(2, 4, -I * o[2], 2, 1);
    return t;
}

EquationTable printed_table(const SystemConfig& c, Real x)
{
    return c.scheme.id == SchemeId::A ? printed_scheme_a(c, x) : printed_scheme_b(c, x);
}

SuperMatrix lindblad_matrix(const SystemConfig& c, Real x)
{
    SuperMatrix a = commutator_superop<Real>(rotating_frame_hamiltonian(c, x));
    for (const auto& ch : c.scheme.decay_channels())
        if (ch.rate > 0.0) a += decay_superop<Real>(ch.upper, ch.lower, ch.rate);
    return a;
}

void require_field(Real x)
{
    if (!(x >= 0.0) || !std::isfinite(x))
        throw ConfigError("field amplitude x must be finite and >= 0");
}

} // namespace

LevelMatrix rotating_frame_hamiltonian(const SystemConfig& config, Real x)
{
    const CavityDrive drive = derive_drives(config);
    LevelMatrix diag = LevelMatrix::Zero();
    LevelMatrix coupling = LevelMatrix::Zero();
    for (const auto& t : drive.transitions) {
        diag(t.upper - 1, t.upper - 1) = -t.detuning;
        coupling(t.upper - 1, t.lower - 1) = -t.weight * x;
    }
    if (drive.control) {
        // Level 4 sits at the two-photon detuning delta_p - delta_control.
        const auto& ctl = *drive.control;
        diag(ctl.lower - 1, ctl.lower - 1) = ctl.detuning - config.delta_p;
        coupling(ctl.upper - 1, ctl.lower - 1) = -ctl.rabi;
    }
    return diag + coupling + coupling.adjoint();
}

Generator build_generator(const SystemConfig& config, Real x)
{
    require_valid(config);
    require_field(x);
    Generator gen;
    gen.field_rabi = x;
    gen.config = config;
    if (config.generator_mode == GeneratorMode::corrected_lindblad)
        gen.matrix = lindblad_matrix(config, x);
    else
        gen.matrix = printed_table(config, x).complete();
    return gen;
}

std::vector<EquationResidual> printed_equation_residuals(const SystemConfig& config,
                                                         Real x,
                                                         const LevelMatrix& sigma)
{
    require_valid(config);
    require_field(x);
    const EquationTable table = printed_table(config, x);
    const StateVector v = vectorize<Real>(sigma);
    const StateVector printed = table.complete() * v;
    const StateVector lindblad = lindblad_matrix(config, x) * v;

    std::vector<EquationResidual> out;
    for (const auto& r : table.rows()) {
        const int k = state_index(r.m, r.n);
        out.push_back({r.equation, r.m, r.n, std::abs(printed(k) - lindblad(k))});
    }
    return out;
}

} // namespace cqed
