#include "epsnet/embedding.hpp"

#include "epsnet/error.hpp"
#include "epsnet/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace epsnet {

namespace {

const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

// int t^(2n) exp(-t^2) dt / sqrt(pi) = (2n-1)!! / 2^n
double gauss_moment(int n) {
    double g = 1.0;
    for (int i = 1; i <= n; ++i) g *= (2.0 * i - 1.0) / 2.0;
    return g;
}

double horner(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
}

// U_n(a) = int_a^inf s^n exp(-s^2) ds / sqrt(pi), n = 0..n_max.
std::vector<double> upper(double a, int n_max) {
    std::vector<double> u(n_max + 1);
    const double g = std::exp(-a * a) * inv_sqrt_pi / 2.0;
    u[0] = std::erfc(a) / 2.0;
    if (n_max >= 1) u[1] = g;
    double an = 1.0;  // a^(n-1)
    for (int n = 2; n <= n_max; ++n) {
        an *= a;
        u[n] = an * g + 0.5 * (n - 1) * u[n - 2];
    }
    return u;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

constexpr char magic[8] = {'E', 'P', 'S', 'M', 'O', 'L', '0', '1'};

}  // namespace

std::shared_ptr<const Mollifier> Mollifier::build(int M) {
    if (M < 0 || M % 2 != 0) throw PreconditionViolated("moment order must be an even nonnegative integer");
    if (M > 12) throw PreconditionViolated("moment order above 12: the Hankel moment system is too ill-conditioned");

    std::shared_ptr<Mollifier> r(new Mollifier());
    r->M_ = M;
    const int m = M / 2;
    Eigen::MatrixXd H(m + 1, m + 1);
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) H(j, i) = gauss_moment(i + j);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(0) = 1.0;
    const Eigen::VectorXd a = H.fullPivLu().solve(rhs);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
    r->cond_ = svd.singularValues()(0) / svd.singularValues()(m);
    r->p_.assign(M + 1, 0.0);
    for (int i = 0; i <= m; ++i) r->p_[2 * i] = a(i);

    r->q_.push_back(r->p_);
    for (int k = 1; k <= max_derivative; ++k) {
        const auto& q = r->q_.back();
        std::vector<double> n(q.size() + 1, 0.0);
        for (std::size_t i = 1; i < q.size(); ++i) n[i - 1] += i * q[i];
        for (std::size_t i = 0; i < q.size(); ++i) n[i + 1] -= 2.0 * q[i];
        r->q_.push_back(std::move(n));
    }

    std::uint64_t h = r->grid_hash();
    h = fnv1a(r->p_.data(), r->p_.size() * sizeof(double), h);
    std::ostringstream fp;
    fp << "gauss-poly M=" << M << " #" << std::hex << h;
    r->fingerprint_ = fp.str();

    std::string path;
    if (const char* dir = std::getenv("EPSNET_CACHE"); dir && *dir) {
        std::ostringstream os;
        os << dir << "/mollifier-M" << M << "-" << std::hex << r->grid_hash() << ".bin";
        path = os.str();
    }
    if (path.empty() || !r->load_cache(path)) {
        r->tabulate();
        if (!path.empty()) r->save_cache(path);
    }

    // moment invariants by quadrature
    const double breaks[] = {-20.0, -10.0, -5.0, 0.0, 5.0, 10.0, 20.0};
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    for (int j = 0; j <= M; ++j) {
        const QuadResult q = integrate([&](double t) { return std::pow(t, j) * r->value(t); }, -40.0, 40.0, breaks, opt);
        r->measured_.push_back(q.value);
        const double want = j == 0 ? 1.0 : 0.0;
        const double tol = j == 0 ? 1e-10 : 1e-9;
        if (!(std::abs(q.value - want) <= tol)) {
            std::ostringstream os;
            os << "mollifier moment " << j << " is " << q.value << ", expected " << want;
            throw Error(os.str());
        }
    }
    return r;
}

double Mollifier::moment(int j) const {
    if (j < 0) throw PreconditionViolated("negative moment index");
    if (j == 0) return 1.0;
    if (j <= M_ || j % 2 == 1) return 0.0;
    double s = 0.0;
    for (int i = 0; 2 * i <= M_; ++i) s += p_[2 * i] * gauss_moment(j / 2 + i);
    return s;
}

double Mollifier::derivative(int k, double t) const {
    if (k < 0 || k > max_derivative) throw PreconditionViolated("mollifier derivative order out of range");
    if (std::abs(t) > 38.0) return 0.0;
    return std::exp(-t * t) * horner(q_[k], t) * inv_sqrt_pi;
}

double Mollifier::incomplete_moment_exact(int j, double t) const {
    if (j < 0) throw PreconditionViolated("negative moment index");
    const std::vector<double> u = upper(std::abs(t), j + M_);
    double s = 0.0;
    for (int i = 0; 2 * i <= M_; ++i) s += p_[2 * i] * u[j + 2 * i];
    if (t >= 0.0) return moment(j) - s;
    // int_{-inf}^t s^n = (-1)^n U_n(-t)
    return j % 2 == 0 ? s : -s;
}

double Mollifier::primitive(double t) const { return incomplete_moment(0, t); }

double Mollifier::incomplete_moment(int j, double t) const {
    if (std::isnan(t)) return t;
    if (j > tabulated_moments || j < 0) return incomplete_moment_exact(j, t);
    if (t <= -table_half_width) return 0.0;
    if (t >= table_half_width) return moment(j);
    return tables_[j](t);
}

void Mollifier::tabulate() {
    tables_.clear();
    for (int j = 0; j <= tabulated_moments; ++j) {
        tables_.push_back(HermiteTable::build(-table_half_width, table_half_width, table_intervals,
                                              [&](double t, double& f, double& d1, double& d2) {
                                                  const double r0 = value(t), r1 = derivative(1, t);
                                                  const double tj = std::pow(t, j);
                                                  f = incomplete_moment_exact(j, t);
                                                  d1 = tj * r0;
                                                  d2 = (j > 0 ? j * std::pow(t, j - 1) * r0 : 0.0) + tj * r1;
                                              }));
    }
}

std::uint64_t Mollifier::grid_hash() const {
    const double lo = -table_half_width, hi = table_half_width;
    const int n = table_intervals, moments = tabulated_moments;
    std::uint64_t h = fnv1a(&lo, sizeof lo);
    h = fnv1a(&hi, sizeof hi, h);
    h = fnv1a(&n, sizeof n, h);
    return fnv1a(&moments, sizeof moments, h);
}

bool Mollifier::load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char mg[8];
    std::int32_t M = 0, count = 0;
    std::uint64_t h = 0;
    in.read(mg, 8);
    in.read(reinterpret_cast<char*>(&M), sizeof M);
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || std::string_view(mg, 8) != std::string_view(magic, 8) || M != M_ || h != grid_hash() ||
        count != static_cast<std::int32_t>(p_.size()))
        return false;
    std::vector<double> p(count);
    in.read(reinterpret_cast<char*>(p.data()), count * sizeof(double));
    if (!in || p != p_) return false;
    const std::size_t nodes = table_intervals + 1;
    std::vector<HermiteTable> tables;
    for (int j = 0; j <= tabulated_moments; ++j) {
        std::vector<double> f(nodes), d1(nodes), d2(nodes);
        for (auto* v : {&f, &d1, &d2}) in.read(reinterpret_cast<char*>(v->data()), nodes * sizeof(double));
        if (!in) return false;
        const double h = 2.0 * table_half_width / table_intervals;
        tables.emplace_back(-table_half_width, h, std::move(f), std::move(d1), std::move(d2));
    }
    tables_ = std::move(tables);
    from_cache_ = true;
    return true;
}

void Mollifier::save_cache(const std::string& path) const {
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
    const std::string tmp = path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(this));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;  // caching is best effort
        const std::int32_t M = M_, count = static_cast<std::int32_t>(p_.size());
        const std::uint64_t h = grid_hash();
        out.write(magic, 8);
        out.write(reinterpret_cast<const char*>(&M), sizeof M);
        out.write(reinterpret_cast<const char*>(&h), sizeof h);
        out.write(reinterpret_cast<const char*>(&count), sizeof count);
        out.write(reinterpret_cast<const char*>(p_.data()), count * sizeof(double));
        for (const auto& t : tables_)
            for (const auto* v : {&t.values(), &t.first(), &t.second()})
                out.write(reinterpret_cast<const char*>(v->data()), v->size() * sizeof(double));
        if (!out) {
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace epsnet
