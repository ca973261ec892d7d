#include "shortpath/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "shortpath/error.hpp"
#include "shortpath/parallel.hpp"
#include "shortpath/rng.hpp"
#include "shortpath/transform.hpp"

namespace shortpath {

namespace {

constexpr int kBlockBits = 12;

void check_vector(std::span<const double> v, std::size_t dim) {
    if (v.size() != dim) throw ParameterError("vector dimension mismatch");
}

}  // namespace

// ---- Landscape ----

std::shared_ptr<const Landscape> Landscape::from_values(int n, std::vector<double> values) {
    if (values.size() != (std::size_t{1} << n)) throw ParameterError("value array must have 2^n entries");
    auto l = std::make_shared<Landscape>();
    l->n = n;
    l->e_star = *std::min_element(values.begin(), values.end());
    if (!(l->e_star < 0.0)) throw MalformedInstance("degenerate instance: E* must be negative");
    l->optimal = optimal_assignments(values, l->e_star);
    l->values = std::move(values);
    return l;
}

std::shared_ptr<const Landscape> Landscape::from_cost(const CostFunction& cost, int cap) {
    return from_values(num_vars(cost), evaluate_all(cost, cap));
}

// ---- HbOperator ----

HbOperator::HbOperator(std::shared_ptr<const Landscape> landscape, std::vector<double> diag,
                       double eta, double b)
    : landscape_(std::move(landscape)), n_(landscape_->n), eta_(eta), b_(b), diag_(std::move(diag)) {
    if (n_ > kLanczosCap) throw EnumerationCapExceeded("n exceeds the operator cap of 26");
}

HbOperator::HbOperator(std::shared_ptr<const Landscape> landscape, double eta, double b)
    : landscape_(std::move(landscape)), n_(landscape_->n), eta_(eta), b_(b) {
    check_eta(eta);
    if (!(b >= 0.0) || !std::isfinite(b)) throw ParameterError("b must be finite and non-negative");
    if (n_ > kLanczosCap) throw EnumerationCapExceeded("n exceeds the operator cap of 26");
    const double scale = std::abs(landscape_->e_star);
    const auto& v = landscape_->values;
    diag_.resize(v.size());
    for (std::size_t z = 0; z < v.size(); ++z) diag_[z] = b * g_eta(eta, v[z] / scale);
}

HbOperator HbOperator::theta_phi(std::shared_ptr<const Landscape> landscape, double theta,
                                 double phi, double q) {
    if (!(q > 0.0)) throw ParameterError("Q must be positive");
    const auto& v = landscape->values;
    std::vector<double> diag(v.size());
    for (std::size_t z = 0; z < v.size(); ++z) diag[z] = std::min(0.0, phi * (v[z] / q + theta));
    return HbOperator(std::move(landscape), std::move(diag), std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN());
}

void HbOperator::apply(std::span<const double> v, std::span<double> out) const {
    const std::size_t size = dim();
    check_vector(v, size);
    check_vector(out, size);
    const double inv_n = 1.0 / n_;
    const int low = std::min(n_, kBlockBits);
    const std::size_t block = std::size_t{1} << low;
    const double* vp = v.data();
    const double* dp = diag_.data();
    double* op = out.data();
    parallel_for(size / block, [&](std::size_t c) {
        const std::size_t base = c * block;
        double acc[std::size_t{1} << kBlockBits];
        std::fill_n(acc, block, 0.0);
        for (int i = 0; i < low; ++i) {
            const std::size_t bit = std::size_t{1} << i;
            for (std::size_t z = 0; z < block; ++z) acc[z] += vp[base + (z ^ bit)];
        }
        for (int i = low; i < n_; ++i) {
            const double* nb = vp + (base ^ (std::size_t{1} << i));
            for (std::size_t z = 0; z < block; ++z) acc[z] += nb[z];
        }
        for (std::size_t z = 0; z < block; ++z)
            op[base + z] = dp[base + z] * vp[base + z] - inv_n * acc[z];
    });
}

LinearOperator HbOperator::as_linear_operator() const {
    return {dim(), [this](std::span<const double> v, std::span<double> out) { apply(v, out); }};
}

Eigen::MatrixXd HbOperator::dense() const {
    if (n_ > kDenseCap) throw ParameterError("dense assembly requires n <= 14");
    const auto size = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index z = 0; z < size; ++z) {
        a(z, z) = diag_[static_cast<std::size_t>(z)];
        for (int i = 0; i < n_; ++i) a(z, z ^ (Eigen::Index{1} << i)) = -1.0 / n_;
    }
    return a;
}

// ---- solves ----

std::vector<double> plus_state(std::size_t dim) {
    return std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

double SpectralSummary::max_overlap_zstar() const {
    double m = 0.0;
    for (double o : overlap_zstar) m = std::max(m, o);
    return m;
}

SolveMethod resolve_method(SolveMethod m, int n) {
    if (m == SolveMethod::Auto) m = n <= 10 ? SolveMethod::Dense : SolveMethod::Lanczos;
    if (m == SolveMethod::Dense && n > kDenseCap) throw ParameterError("dense solve requires n <= 14");
    if (m == SolveMethod::Lanczos && n > kLanczosCap) throw ParameterError("Lanczos solve requires n <= 26");
    return m;
}

void finish_summary(SpectralSummary& s, const Landscape& land) {
    auto& psi = s.psi;
    std::size_t arg = 0;
    for (std::size_t z = 1; z < psi.size(); ++z)
        if (std::abs(psi[z]) > std::abs(psi[arg])) arg = z;
    if (psi[arg] < 0.0)
        for (auto& x : psi) x = -x;
    auto clamp = [](double x) { return (x < 0.0 && x > -1e-8) ? 0.0 : x; };
    double sum = 0.0;
    for (double x : psi) sum += clamp(x);
    s.overlap_plus = sum / std::sqrt(static_cast<double>(psi.size()));
    double opt2 = 0.0;
    s.overlap_zstar.clear();
    for (auto z : land.optimal) {
        const double a = clamp(psi[z]);
        s.overlap_zstar.push_back(a);
        opt2 += a * a;
    }
    s.overlap_opt = std::sqrt(opt2);
}

namespace {

std::vector<double> mixed_start(std::size_t dim, std::uint64_t seed) {
    CounterRng rng(seed, 0x5354415254ULL);
    std::vector<double> r(dim);
    for (auto& x : r) x = rng.normal();
    const double rn = norm(r);
    const double p = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& x : r) x = p + 0.5 * x / rn;
    return r;
}

std::vector<double> random_start(std::size_t dim, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    std::vector<double> r(dim);
    for (auto& x : r) x = rng.normal();
    return r;
}

}  // namespace

SpectralSummary ground_state(const HbOperator& op, const SolveOptions& opts) {
    const int n = op.n();
    const SolveMethod method = resolve_method(opts.method, n);
    SpectralSummary s;
    s.n = n;
    if (method == SolveMethod::Dense) {
        s.tol = opts.tol > 0.0 ? opts.tol : kDenseTol;
        s.method = "dense";
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
        const auto& ev = es.eigenvalues();
        s.e_b = ev(0);
        s.e_excited = ev.size() > 1 ? ev(1) : std::numeric_limits<double>::infinity();
        s.e_max = ev(ev.size() - 1);
        const Eigen::VectorXd v = es.eigenvectors().col(0);
        s.psi.assign(v.data(), v.data() + v.size());
        std::vector<double> r(op.dim());
        op.apply(s.psi, r);
        for (std::size_t z = 0; z < r.size(); ++z) r[z] -= s.e_b * s.psi[z];
        s.residual = norm(r);
    } else {
        s.tol = opts.tol > 0.0 ? opts.tol : kLanczosTol;
        s.method = "lanczos";
        LanczosOptions lo = opts.lanczos;
        lo.tol = s.tol;
        const auto lin = op.as_linear_operator();
        auto g = lanczos_lowest(lin, mixed_start(op.dim(), opts.seed), {}, lo);
        s.e_b = g.value;
        s.residual = g.residual;
        s.matvecs = g.matvecs;
        s.psi = std::move(g.vector);
        LanczosOptions lx = lo;
        lx.value_only = true;
        const std::vector<std::vector<double>> locked{s.psi};
        auto e1 = lanczos_lowest(lin, random_start(op.dim(), opts.seed, 1), locked, lx);
        s.e_excited = e1.value;
        s.matvecs += e1.matvecs;
        s.e_max = std::numeric_limits<double>::quiet_NaN();
        if (opts.compute_max) {
            LinearOperator neg{op.dim(), [&op](std::span<const double> v, std::span<double> out) {
                                   op.apply(v, out);
                                   for (auto& x : out) x = -x;
                               }};
            auto mx = lanczos_lowest(neg, random_start(op.dim(), opts.seed, 2), {}, lx);
            s.e_max = -mx.value;
            s.matvecs += mx.matvecs;
        }
    }
    s.degenerate = s.e_excited - s.e_b < 10.0 * s.tol;
    finish_summary(s, op.landscape());
    return s;
}

std::vector<double> lowest_eigenvalues(const HbOperator& op, int count, const SolveOptions& opts) {
    const SolveMethod method = resolve_method(opts.method, op.n());
    const int avail = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(count), op.dim()));
    std::vector<double> out;
    if (method == SolveMethod::Dense) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense(), Eigen::EigenvaluesOnly);
        for (int i = 0; i < avail; ++i) out.push_back(es.eigenvalues()(i));
        return out;
    }
    LanczosOptions lo = opts.lanczos;
    lo.tol = opts.tol > 0.0 ? opts.tol : kLanczosTol;
    const auto lin = op.as_linear_operator();
    std::vector<std::vector<double>> locked;
    for (int i = 0; i < avail; ++i) {
        LanczosOptions li = lo;
        // Deflation needs accurate vectors except for the last eigenvalue.
        li.value_only = (i + 1 == avail);
        auto start = i == 0 ? mixed_start(op.dim(), opts.seed)
                            : random_start(op.dim(), opts.seed, static_cast<std::uint64_t>(i));
        auto p = lanczos_lowest(lin, std::move(start), locked, li);
        out.push_back(p.value);
        locked.push_back(std::move(p.vector));
    }
    return out;
}

double deflated_ground_energy(const HbOperator& op, const SolveOptions& opts) {
    const SolveMethod method = resolve_method(opts.method, op.n());
    const auto plus = plus_state(op.dim());
    if (method == SolveMethod::Dense) {
        const auto size = static_cast<Eigen::Index>(op.dim());
        const Eigen::Map<const Eigen::VectorXd> p(plus.data(), size);
        const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(size, size) - p * p.transpose();
        Eigen::MatrixXd a = proj * op.dense() * proj;
        const double shift = 10.0 + a.cwiseAbs().rowwise().sum().maxCoeff();
        a += shift * p * p.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    LanczosOptions lo = opts.lanczos;
    lo.tol = opts.tol > 0.0 ? opts.tol : kLanczosTol;
    lo.value_only = true;
    const std::vector<std::vector<double>> locked{plus};
    return lanczos_lowest(op.as_linear_operator(), random_start(op.dim(), opts.seed, 3), locked, lo).value;
}

// ---- P_l ----

std::vector<double> PEllResult::values() const {
    std::vector<double> out(direction.size());
    const double s = std::exp(log_scale);
    for (std::size_t z = 0; z < out.size(); ++z) out[z] = s * direction[z];
    return out;
}

PEllResult apply_P_ell(const HbOperator& op, double e_b, long ell, std::span<const double> v) {
    if (e_b == 0.0) throw ParameterError("P_l needs a nonzero ground energy");
    if (ell < 0) throw ParameterError("l must be non-negative");
    check_vector(v, op.dim());
    PEllResult r;
    r.direction.assign(v.begin(), v.end());
    const double n0 = norm(r.direction);
    if (n0 == 0.0) {
        r.log_scale = -std::numeric_limits<double>::infinity();
        return r;
    }
    for (auto& x : r.direction) x /= n0;
    r.log_scale = std::log(n0);
    std::vector<double> tmp(op.dim());
    for (long step = 0; step < ell; ++step) {
        op.apply(r.direction, tmp);
        const double nt = norm(tmp) / std::abs(e_b);
        if (nt == 0.0) {
            std::fill(r.direction.begin(), r.direction.end(), 0.0);
            r.log_scale = -std::numeric_limits<double>::infinity();
            return r;
        }
        const double inv = 1.0 / (nt * e_b);
        for (std::size_t z = 0; z < tmp.size(); ++z) r.direction[z] = tmp[z] * inv;
        r.log_scale += std::log(nt);
    }
    return r;
}

std::vector<double> plus_P_ell_row(const HbOperator& op, double e_b, long ell) {
    return apply_P_ell(op, e_b, ell, plus_state(op.dim())).values();
}

// ---- psi dump ----

namespace {

constexpr char kPsiMagic[8] = {'S', 'P', 'P', 'S', 'I', '0', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw MalformedInstance("truncated psi file");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

}  // namespace

void write_psi(const std::string& path, const PsiHeader& h, std::span<const double> psi) {
    if (psi.size() != (std::size_t{1} << h.n)) throw ParameterError("psi length must be 2^n");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os.write(kPsiMagic, 8);
    put_u64(os, static_cast<std::uint64_t>(h.n));
    put_u64(os, std::bit_cast<std::uint64_t>(h.b));
    put_u64(os, std::bit_cast<std::uint64_t>(h.eta));
    put_u64(os, h.seed);
    for (double x : psi) put_u64(os, std::bit_cast<std::uint64_t>(x));
}

std::vector<double> read_psi(const std::string& path, PsiHeader& h) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kPsiMagic, 8) != 0) throw MalformedInstance("not a psi file");
    h.n = static_cast<int>(get_u64(is));
    if (h.n < 1 || h.n > kLanczosCap) throw MalformedInstance("psi file has invalid n");
    h.b = std::bit_cast<double>(get_u64(is));
    h.eta = std::bit_cast<double>(get_u64(is));
    h.seed = get_u64(is);
    std::vector<double> psi(std::size_t{1} << h.n);
    for (auto& x : psi) x = std::bit_cast<double>(get_u64(is));
    return psi;
}

}  // namespace shortpath
