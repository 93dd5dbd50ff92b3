#include "cspectra/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "cspectra/parallel.hpp"

namespace cspectra {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr std::size_t tri(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
}

// Fully normalized associated Legendre values and theta-derivatives at
// cos(theta)=ct, sin(theta)=st>0, all 0<=m<=l<=L. Normalization makes
// {Y_{l,0}=P(l,0), Y_{l,+-m}=sqrt(2) P(l,m) {cos,sin}(m phi)} orthonormal
// w.r.t. surface measure.
void legendre_bar(int L, double ct, double st, std::vector<double>& p, std::vector<double>& dp) {
    std::size_t count = tri(L, L) + 1;
    p.assign(count, 0.0);
    dp.assign(count, 0.0);
    p[tri(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 1; m <= L; ++m)
        p[tri(m, m)] = st * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * p[tri(m - 1, m - 1)];
    for (int m = 0; m < L; ++m)
        p[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * p[tri(m, m)];
    for (int m = 0; m <= L; ++m) {
        for (int l = m + 2; l <= L; ++l) {
            double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
            double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - m * m) /
                                 (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
            p[tri(l, m)] = a * (ct * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
        }
    }
    for (int m = 0; m <= L; ++m) {
        dp[tri(m, m)] = m * (ct / st) * p[tri(m, m)];
        for (int l = m + 1; l <= L; ++l) {
            double c = std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) *
                                 (static_cast<double>(l) * l - m * m));
            dp[tri(l, m)] = (l * ct * p[tri(l, m)] - c * p[tri(l - 1, m)]) / st;
        }
    }
}
}  // namespace

long long dim_harmonic(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("dim_harmonic: need n >= 2 and k >= 0");
    if (k == 0) return 1;
    // C(k+n-2, n-2), exact in integer arithmetic.
    long long binom = 1;
    for (int j = 1; j <= n - 2; ++j) binom = binom * (k + j) / j;
    return (2LL * k + n - 2) * binom / (k + n - 2);
}

double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("unit_ball_volume: k >= 0");
    return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double radon_eigenvalue(int n, int k) {
    if (n < 3 || k < 0) throw std::invalid_argument("radon_eigenvalue: need n >= 3 and k >= 0");
    if (k % 2 == 1) return 0.0;
    double mag = 1.0;
    for (int j = 2; j <= k; j += 2) mag *= static_cast<double>(j - 1) / (n + j - 3);
    return ((k / 2) % 2 == 0 ? 1.0 : -1.0) * mag;
}

double cosine_eigenvalue(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("cosine_eigenvalue: need n >= 2 and k >= 0");
    if (k % 2 == 1) return 0.0;
    double om = unit_ball_volume(n - 1);
    if (k == 0) return 2.0 * om;
    double mag = 2.0 / (n + 1);
    for (int j = 4; j <= k; j += 2) mag *= static_cast<double>(j - 3) / (n + j - 1);
    return (((k - 2) / 2) % 2 == 0 ? 1.0 : -1.0) * om * mag;
}

double box_eigenvalue(int n, int k) {
    if (n < 2 || k < 0) throw std::invalid_argument("box_eigenvalue: need n >= 2 and k >= 0");
    return (n - 1.0) - static_cast<double>(k) * (k + n - 2);
}

SobolevIndex::SobolevIndex(double order) : s(order) {
    if (!(order >= 0.0)) throw std::invalid_argument("SobolevIndex: s >= 0 required");
}

HarmonicSpectrum::HarmonicSpectrum(int ambient_dim, int max_degree) : n_(ambient_dim), L_(max_degree) {
    if (n_ < 2) throw std::invalid_argument("HarmonicSpectrum: n >= 2");
    if (L_ < 0) throw std::invalid_argument("HarmonicSpectrum: L >= 0");
    offsets_.resize(L_ + 2);
    offsets_[0] = 0;
    for (int k = 0; k <= L_; ++k)
        offsets_[k + 1] = offsets_[k] + static_cast<std::size_t>(dim_harmonic(n_, k));
    coeffs_.assign(offsets_[L_ + 1], 0.0);
}

long long HarmonicSpectrum::degree_dimension(int k) const { return dim_harmonic(n_, k); }

std::size_t HarmonicSpectrum::index(int k, int l) const {
    if (k < 0 || k > L_) throw std::out_of_range("HarmonicSpectrum: degree out of range");
    std::size_t dim = offsets_[k + 1] - offsets_[k];
    if (l < 1 || static_cast<std::size_t>(l) > dim)
        throw std::out_of_range("HarmonicSpectrum: order out of range");
    return offsets_[k] + static_cast<std::size_t>(l - 1);
}

double HarmonicSpectrum::l2_norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
}

double HarmonicSpectrum::degree_energy(int k) const {
    if (k < 0 || k > L_) return 0.0;
    double s = 0.0;
    for (std::size_t j = offsets_[k]; j < offsets_[k + 1]; ++j) s += coeffs_[j] * coeffs_[j];
    return s;
}

namespace {
void check_compatible(const HarmonicSpectrum& a, const HarmonicSpectrum& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.max_degree() != b.max_degree())
        throw std::invalid_argument("HarmonicSpectrum: incompatible operands");
}
}  // namespace

HarmonicSpectrum& HarmonicSpectrum::operator+=(const HarmonicSpectrum& o) {
    check_compatible(*this, o);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    return *this;
}
HarmonicSpectrum& HarmonicSpectrum::operator-=(const HarmonicSpectrum& o) {
    check_compatible(*this, o);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
    return *this;
}
HarmonicSpectrum& HarmonicSpectrum::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}
void HarmonicSpectrum::scale_degree(int k, double s) {
    if (k < 0 || k > L_) return;
    for (std::size_t j = offsets_[k]; j < offsets_[k + 1]; ++j) coeffs_[j] *= s;
}
HarmonicSpectrum HarmonicSpectrum::truncated(int max_degree) const {
    HarmonicSpectrum out(n_, max_degree);
    int copy_to = std::min(max_degree, L_);
    for (int k = 0; k <= copy_to; ++k)
        for (int l = 1; l <= static_cast<int>(offsets_[k + 1] - offsets_[k]); ++l)
            out.at(k, l) = at(k, l);
    return out;
}

HarmonicSpectrum operator+(HarmonicSpectrum a, const HarmonicSpectrum& b) { return a += b; }
HarmonicSpectrum operator-(HarmonicSpectrum a, const HarmonicSpectrum& b) { return a -= b; }
HarmonicSpectrum operator*(HarmonicSpectrum a, double s) { return a *= s; }

double sobolev_norm(const HarmonicSpectrum& spec, SobolevIndex s) {
    double total = 0.0;
    for (int k = 0; k <= spec.max_degree(); ++k)
        total += std::pow(1.0 + static_cast<double>(k) * k, s.s) * spec.degree_energy(k);
    return std::sqrt(total);
}

namespace {

void check_grid_for_analysis(const SphereGrid& grid, int L) {
    if (2 * L > grid.exactness_degree())
        throw std::invalid_argument("analyze: grid exactness below 2L");
}

// S^2 analysis, factorized over longitude then colatitude. Fixed summation
// order in both stages keeps the result independent of the thread count.
HarmonicSpectrum analyze_s2(const ScalarField& field, int L) {
    const auto& grid = *field.grid();
    int T = grid.resolution();
    int P = 2 * T;
    // G[(m_signed+L)*T + it] = sum_ip trig(m phi_ip) w f
    std::vector<double> G(static_cast<std::size_t>(2 * L + 1) * T, 0.0);
    const auto& w = grid.weights();
    parallel_for(static_cast<std::size_t>(2 * L + 1) * T, [&](std::size_t b, std::size_t e) {
        for (std::size_t cell = b; cell < e; ++cell) {
            int mi = static_cast<int>(cell / T);
            int it = static_cast<int>(cell % T);
            int m = mi - L;  // signed order: >=0 cosine, <0 sine
            double s = 0.0;
            for (int ip = 0; ip < P; ++ip) {
                std::size_t idx = static_cast<std::size_t>(it) * P + ip;
                double phi = grid.azimuths()[ip];
                double trig = m >= 0 ? std::cos(m * phi) : std::sin(-m * phi);
                s += trig * w[idx] * field[idx];
            }
            G[cell] = s;
        }
    });

    HarmonicSpectrum spec(3, L);
    std::vector<std::vector<double>> plm(T), dplm(T);
    for (int it = 0; it < T; ++it) {
        double theta = grid.colatitudes()[it];
        legendre_bar(L, std::cos(theta), std::sin(theta), plm[it], dplm[it]);
    }
    for (int k = 0; k <= L; ++k) {
        for (int l = 1; l <= 2 * k + 1; ++l) {
            int m = l - 1 - k;
            double factor = m == 0 ? 1.0 : std::numbers::sqrt2;
            double s = 0.0;
            for (int it = 0; it < T; ++it)
                s += plm[it][tri(k, std::abs(m))] * G[static_cast<std::size_t>(m + L) * T + it];
            spec.at(k, l) = factor * s;
        }
    }
    return spec;
}

HarmonicSpectrum analyze_s1(const ScalarField& field, int L) {
    const auto& grid = *field.grid();
    std::size_t P = grid.size();
    const auto& w = grid.weights();
    const auto& ang = grid.angles();
    HarmonicSpectrum spec(2, L);
    double c0 = 0.0;
    for (std::size_t j = 0; j < P; ++j) c0 += w[j] * field[j];
    spec.at(0, 1) = c0 / std::sqrt(2.0 * kPi);
    for (int k = 1; k <= L; ++k) {
        double cc = 0.0, cs = 0.0;
        for (std::size_t j = 0; j < P; ++j) {
            cc += w[j] * field[j] * std::cos(k * ang[j]);
            cs += w[j] * field[j] * std::sin(k * ang[j]);
        }
        spec.at(k, 1) = cc / std::sqrt(kPi);
        spec.at(k, 2) = cs / std::sqrt(kPi);
    }
    return spec;
}

}  // namespace

HarmonicSpectrum analyze(const ScalarField& field, int max_degree) {
    if (!field.all_finite()) throw std::invalid_argument("analyze: non-finite field values");
    check_grid_for_analysis(*field.grid(), max_degree);
    return field.grid()->ambient_dim() == 3 ? analyze_s2(field, max_degree)
                                            : analyze_s1(field, max_degree);
}

HarmonicSpectrum analyze_checked(const ScalarField& field, int max_degree, double aliasing_tol) {
    HarmonicSpectrum spec = analyze(field, max_degree);
    double total = 0.0;
    for (int k = 0; k <= max_degree; ++k) total += spec.degree_energy(k);
    double top = spec.degree_energy(max_degree) + spec.degree_energy(max_degree - 1);
    if (total > 0.0 && top > aliasing_tol * total)
        throw std::runtime_error("analyze_checked: aliasing monitor tripped (out-of-band energy)");
    return spec;
}

ScalarField synthesize(const HarmonicSpectrum& spec, GridPtr grid) {
    if (spec.ambient_dim() != grid->ambient_dim())
        throw std::invalid_argument("synthesize: spectrum/grid dimension mismatch");
    int L = spec.max_degree();
    ScalarField out(grid);
    if (grid->ambient_dim() == 3) {
        int T = grid->resolution();
        int P = 2 * T;
        // H[(m+L)*T + it] = sum_k c_{k,m} P(k,|m|)(theta_it), then a trig pass.
        std::vector<double> H(static_cast<std::size_t>(2 * L + 1) * T, 0.0);
        std::vector<double> plm, dplm;
        for (int it = 0; it < T; ++it) {
            double theta = grid->colatitudes()[it];
            legendre_bar(L, std::cos(theta), std::sin(theta), plm, dplm);
            for (int k = 0; k <= L; ++k)
                for (int l = 1; l <= 2 * k + 1; ++l) {
                    int m = l - 1 - k;
                    double factor = m == 0 ? 1.0 : std::numbers::sqrt2;
                    H[static_cast<std::size_t>(m + L) * T + it] +=
                        factor * spec.at(k, l) * plm[tri(k, std::abs(m))];
                }
        }
        parallel_for(static_cast<std::size_t>(T) * P, [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int it = static_cast<int>(idx / P);
                int ip = static_cast<int>(idx % P);
                double phi = grid->azimuths()[ip];
                double s = H[static_cast<std::size_t>(L) * T + it];  // m=0
                for (int m = 1; m <= L; ++m) {
                    s += H[static_cast<std::size_t>(m + L) * T + it] * std::cos(m * phi);
                    s += H[static_cast<std::size_t>(-m + L) * T + it] * std::sin(m * phi);
                }
                out[idx] = s;
            }
        });
    } else {
        const auto& ang = grid->angles();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            double s = spec.at(0, 1) / std::sqrt(2.0 * kPi);
            for (int k = 1; k <= L; ++k)
                s += (spec.at(k, 1) * std::cos(k * ang[j]) + spec.at(k, 2) * std::sin(k * ang[j])) /
                     std::sqrt(kPi);
            out[j] = s;
        }
    }
    return out;
}

FieldJet synthesize_jet(const HarmonicSpectrum& spec, GridPtr grid) {
    if (spec.ambient_dim() != grid->ambient_dim())
        throw std::invalid_argument("synthesize_jet: spectrum/grid dimension mismatch");
    int L = spec.max_degree();
    FieldJet jet{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                 ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    if (grid->ambient_dim() == 3) {
        int T = grid->resolution();
        int P = 2 * T;
        std::vector<std::vector<double>> plm(T), dplm(T);
        for (int it = 0; it < T; ++it) {
            double theta = grid->colatitudes()[it];
            legendre_bar(L, std::cos(theta), std::sin(theta), plm[it], dplm[it]);
        }
        parallel_for(static_cast<std::size_t>(T) * P, [&](std::size_t b, std::size_t e) {
            for (std::size_t idx = b; idx < e; ++idx) {
                int it = static_cast<int>(idx / P);
                int ip = static_cast<int>(idx % P);
                double theta = grid->colatitudes()[it];
                double phi = grid->azimuths()[ip];
                double ct = std::cos(theta), st = std::sin(theta);
                double f = 0, ft = 0, fp = 0, ftt = 0, ftp = 0, fpp = 0;
                for (int k = 0; k <= L; ++k) {
                    for (int l = 1; l <= 2 * k + 1; ++l) {
                        double c = spec.at(k, l);
                        if (c == 0.0) continue;
                        int m = l - 1 - k;
                        int am = std::abs(m);
                        double pv = plm[it][tri(k, am)];
                        double pd = dplm[it][tri(k, am)];
                        // Legendre ODE supplies the second theta-derivative.
                        double pdd = -(ct / st) * pd +
                                     (static_cast<double>(am) * am / (st * st) -
                                      static_cast<double>(k) * (k + 1)) * pv;
                        double trig, dtrig;
                        if (m == 0) {
                            trig = 1.0;
                            dtrig = 0.0;
                        } else if (m > 0) {
                            trig = std::numbers::sqrt2 * std::cos(m * phi);
                            dtrig = -m * std::numbers::sqrt2 * std::sin(m * phi);
                        } else {
                            trig = std::numbers::sqrt2 * std::sin(am * phi);
                            dtrig = am * std::numbers::sqrt2 * std::cos(am * phi);
                        }
                        f += c * pv * trig;
                        ft += c * pd * trig;
                        fp += c * pv * dtrig;
                        ftt += c * pdd * trig;
                        ftp += c * pd * dtrig;
                        fpp += c * pv * (-static_cast<double>(am) * am) * trig;
                    }
                }
                jet.f[idx] = f;
                jet.ft[idx] = ft;
                jet.fp[idx] = fp;
                jet.ftt[idx] = ftt;
                jet.ftp[idx] = ftp;
                jet.fpp[idx] = fpp;
            }
        });
    } else {
        const auto& ang = grid->angles();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            double a = ang[j];
            double f = spec.at(0, 1) / std::sqrt(2.0 * kPi), ft = 0, ftt = 0;
            for (int k = 1; k <= L; ++k) {
                double ck = spec.at(k, 1) / std::sqrt(kPi);
                double sk = spec.at(k, 2) / std::sqrt(kPi);
                double ckt = std::cos(k * a), skt = std::sin(k * a);
                f += ck * ckt + sk * skt;
                ft += k * (-ck * skt + sk * ckt);
                ftt += -static_cast<double>(k) * k * (ck * ckt + sk * skt);
            }
            jet.f[j] = f;
            jet.ft[j] = ft;
            jet.ftt[j] = ftt;
        }
    }
    return jet;
}

double evaluate(const HarmonicSpectrum& spec, const Vec3& u) {
    int L = spec.max_degree();
    if (spec.ambient_dim() == 3) {
        double z = std::clamp(u.z, -1.0, 1.0);
        double theta = std::acos(z);
        double phi = std::atan2(u.y, u.x);
        double st = std::sin(theta);
        if (st < 1e-14) st = 1e-14;  // basis values with m>0 vanish there anyway
        std::vector<double> plm, dplm;
        legendre_bar(L, std::cos(theta), st, plm, dplm);
        double s = 0.0;
        for (int k = 0; k <= L; ++k)
            for (int l = 1; l <= 2 * k + 1; ++l) {
                double c = spec.at(k, l);
                if (c == 0.0) continue;
                int m = l - 1 - k;
                double trig = m == 0 ? 1.0
                              : m > 0 ? std::numbers::sqrt2 * std::cos(m * phi)
                                      : std::numbers::sqrt2 * std::sin(-m * phi);
                s += c * plm[tri(k, std::abs(m))] * trig;
            }
        return s;
    }
    double a = std::atan2(u.y, u.x);
    double s = spec.at(0, 1) / std::sqrt(2.0 * kPi);
    for (int k = 1; k <= L; ++k)
        s += (spec.at(k, 1) * std::cos(k * a) + spec.at(k, 2) * std::sin(k * a)) / std::sqrt(kPi);
    return s;
}

std::string spectrum_to_json(const HarmonicSpectrum& spec) {
    nlohmann::json j;
    j["n"] = spec.ambient_dim();
    j["L"] = spec.max_degree();
    auto coeffs = nlohmann::json::array();
    for (int k = 0; k <= spec.max_degree(); ++k)
        for (int l = 1; l <= static_cast<int>(spec.degree_dimension(k)); ++l)
            coeffs.push_back(nlohmann::json::array({k, l, spec.at(k, l)}));
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

HarmonicSpectrum spectrum_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    HarmonicSpectrum spec(j.at("n").get<int>(), j.at("L").get<int>());
    for (const auto& row : j.at("coeffs")) {
        if (!row.is_array() || row.size() != 3)
            throw std::runtime_error("spectrum json: malformed coefficient row");
        spec.at(row[0].get<int>(), row[1].get<int>()) = row[2].get<double>();
    }
    return spec;
}

}  // namespace cspectra
