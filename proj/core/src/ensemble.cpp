#include "mdnz/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "mdnz/errors.hpp"

namespace mdnz {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial,
                          std::string_view role) {
    // splitmix64 over (master, trial, fnv1a(role)).
    std::uint64_t h = 1469598103934665603ull;
    for (char c : role) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (trial + 1) + h;
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    };
    return mix(mix(z));
}

struct SymmetricMatrixInstance::State {
    Eigen::MatrixXd entries;
    mutable std::once_flag once;
    mutable std::shared_ptr<const EigenDecomposition> eig;
};

SymmetricMatrixInstance::SymmetricMatrixInstance(Eigen::MatrixXd entries)
    : state_(std::make_shared<State>()) {
    if (entries.rows() != entries.cols())
        throw invalid_parameter("SymmetricMatrixInstance: matrix not square");
    if (entries != entries.transpose())
        throw invalid_parameter(
            "SymmetricMatrixInstance: matrix not exactly symmetric");
    state_->entries = std::move(entries);
}

SymmetricMatrixInstance::SymmetricMatrixInstance(Eigen::MatrixXd entries,
                                                 EigenDecomposition eig)
    : SymmetricMatrixInstance(std::move(entries)) {
    state_->eig = std::make_shared<const EigenDecomposition>(std::move(eig));
}

int SymmetricMatrixInstance::dim() const {
    return state_ ? static_cast<int>(state_->entries.rows()) : 0;
}

const Eigen::MatrixXd& SymmetricMatrixInstance::entries() const {
    if (!state_) throw invalid_parameter("SymmetricMatrixInstance: empty");
    return state_->entries;
}

const EigenDecomposition& SymmetricMatrixInstance::eigen() const {
    if (!state_) throw invalid_parameter("SymmetricMatrixInstance: empty");
    std::call_once(state_->once, [this] {
        if (state_->eig) return;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state_->entries);
        if (solver.info() != Eigen::Success)
            throw internal_error("eigendecomposition failed");
        auto eig = std::make_shared<EigenDecomposition>();
        eig->values = solver.eigenvalues();
        eig->vectors = solver.eigenvectors();
        state_->eig = std::move(eig);
    });
    return *state_->eig;
}

bool SymmetricMatrixInstance::eigen_cached() const {
    return state_ && state_->eig != nullptr;
}

std::vector<double> SymmetricMatrixInstance::eigenvalues() const {
    const auto& v = eigen().values;
    return {v.data(), v.data() + v.size()};
}

SymmetricMatrixInstance sample_goe(int n, std::uint64_t seed) {
    if (n < 1) throw invalid_parameter("sample_goe: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double off = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag = std::sqrt(2.0) * off;
    Eigen::MatrixXd z(n, n);
    for (int i = 0; i < n; ++i) {
        z(i, i) = diag * normal(rng);
        for (int j = i + 1; j < n; ++j) {
            const double v = off * normal(rng);
            z(i, j) = v;
            z(j, i) = v;
        }
    }
    return SymmetricMatrixInstance(std::move(z));
}

Eigen::MatrixXd sample_haar_orthogonal(int n, std::uint64_t seed) {
    if (n < 1) throw invalid_parameter("sample_haar_orthogonal: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

namespace {

// Haar column frame V (n x m), for the sub-linear construction.
Eigen::MatrixXd stiefel_frame(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
    return 0.5 * (a + a.transpose());
}

}  // namespace

SymmetricMatrixInstance sample_rot_inv_signal(
    int n, const std::vector<double>& eigenvalues, std::uint64_t seed) {
    if (n < 1) throw invalid_parameter("sample_rot_inv_signal: n must be >= 1");
    const int m = static_cast<int>(eigenvalues.size());
    if (m > n)
        throw invalid_parameter(
            "sample_rot_inv_signal: more eigenvalues than dimensions");
    for (double l : eigenvalues)
        if (!std::isfinite(l))
            throw invalid_parameter(
                "sample_rot_inv_signal: non-finite eigenvalue");

    std::mt19937_64 rng(seed);
    if (m == n) {
        const Eigen::MatrixXd o = sample_haar_orthogonal(n, rng());
        Eigen::VectorXd lam(n);
        for (int i = 0; i < n; ++i) lam(i) = eigenvalues[i];
        Eigen::MatrixXd s = symmetrized(o * lam.asDiagonal() * o.transpose());

        // Prefill the eigen cache: sort ascending, carry the columns along.
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return lam(a) < lam(b); });
        EigenDecomposition eig;
        eig.values.resize(n);
        eig.vectors.resize(n, n);
        for (int i = 0; i < n; ++i) {
            eig.values(i) = lam(order[i]);
            eig.vectors.col(i) = o.col(order[i]);
        }
        return SymmetricMatrixInstance(std::move(s), std::move(eig));
    }
    if (m == 0) return SymmetricMatrixInstance(Eigen::MatrixXd::Zero(n, n));
    const Eigen::MatrixXd v = stiefel_frame(n, m, rng);
    Eigen::VectorXd lam(m);
    for (int i = 0; i < m; ++i) lam(i) = eigenvalues[i];
    Eigen::MatrixXd s = symmetrized(v * lam.asDiagonal() * v.transpose());
    return SymmetricMatrixInstance(std::move(s));
}

SymmetricMatrixInstance sample_rot_inv_signal(int n,
                                              const SpectralMeasure& law,
                                              int m, std::uint64_t seed) {
    if (m < 0 || m > n)
        throw invalid_parameter("sample_rot_inv_signal: bad draw count");
    std::mt19937_64 rng(derive_seed(seed, 0, "eigenvalues"));
    std::vector<double> lam(m);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double lo = law.support_min(), hi = law.support_max();
    for (int i = 0; i < m; ++i) {
        // Inverse-CDF draw via bisection on the measure's CDF.
        const double u = unif(rng);
        double a = lo - 1e-9, b = hi + 1e-9;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            (law.cdf(mid) < u ? a : b) = mid;
        }
        lam[i] = 0.5 * (a + b);
    }
    return sample_rot_inv_signal(n, lam, derive_seed(seed, 0, "frame"));
}

FactorSignal sample_factor_signal(int n, int m, const ScalarPrior& prior,
                                  std::uint64_t seed) {
    if (n < 1 || m < 1)
        throw invalid_parameter("sample_factor_signal: need n, m >= 1");
    std::mt19937_64 rng(seed);
    FactorSignal fs;
    fs.m = m;
    fs.x.resize(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) fs.x(i, j) = prior.sample(rng);
    Eigen::MatrixXd s =
        symmetrized(fs.x * fs.x.transpose() / static_cast<double>(n));
    fs.s = SymmetricMatrixInstance(std::move(s));
    return fs;
}

NoiseSpec NoiseSpec::wigner() { return NoiseSpec{}; }

NoiseSpec NoiseSpec::uniform_spectrum(double a, double b) {
    if (!(b > a)) throw invalid_parameter("uniform_spectrum: need a < b");
    NoiseSpec ns;
    ns.kind = Kind::uniform_spectrum;
    ns.a = a;
    ns.b = b;
    return ns;
}

NoiseSpec NoiseSpec::rot_inv(SpectralMeasure law) {
    NoiseSpec ns;
    ns.kind = Kind::rot_inv;
    ns.law = std::make_shared<const SpectralMeasure>(std::move(law));
    return ns;
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
    if (text == "wigner") return wigner();
    if (text.rfind("uniform:", 0) == 0) {
        const auto comma = text.find(',', 8);
        if (comma == std::string::npos)
            throw invalid_parameter("noise: uniform needs two bounds");
        return uniform_spectrum(std::stod(text.substr(8, comma - 8)),
                                std::stod(text.substr(comma + 1)));
    }
    return rot_inv(parse_measure(text));
}

Interval NoiseSpec::support() const {
    switch (kind) {
        case Kind::wigner:
            return {-2.0, 2.0};
        case Kind::uniform_spectrum:
            return {a, b};
        case Kind::rot_inv:
            return {law->support_min(), law->support_max()};
    }
    throw internal_error("NoiseSpec::support: bad kind");
}

std::string NoiseSpec::describe() const {
    switch (kind) {
        case Kind::wigner:
            return "wigner";
        case Kind::uniform_spectrum:
            return "uniform:" + std::to_string(a) + "," + std::to_string(b);
        case Kind::rot_inv:
            return "rot_inv";
    }
    return "?";
}

SymmetricMatrixInstance observe(const SymmetricMatrixInstance& s, double gamma,
                                const NoiseSpec& noise, std::uint64_t seed) {
    if (gamma < 0.0) throw invalid_parameter("observe: gamma must be >= 0");
    const int n = s.dim();
    SymmetricMatrixInstance z;
    switch (noise.kind) {
        case NoiseSpec::Kind::wigner:
            z = sample_goe(n, seed);
            break;
        case NoiseSpec::Kind::uniform_spectrum: {
            std::mt19937_64 rng(derive_seed(seed, 0, "noise-eigs"));
            std::uniform_real_distribution<double> unif(noise.a, noise.b);
            std::vector<double> lam(n);
            for (auto& l : lam) l = unif(rng);
            z = sample_rot_inv_signal(n, lam,
                                      derive_seed(seed, 0, "noise-frame"));
            break;
        }
        case NoiseSpec::Kind::rot_inv:
            z = sample_rot_inv_signal(n, *noise.law, n, seed);
            break;
    }
    Eigen::MatrixXd y = std::sqrt(gamma) * s.entries() + z.entries();
    y = symmetrized(y);
    return SymmetricMatrixInstance(std::move(y));
}

}  // namespace mdnz
