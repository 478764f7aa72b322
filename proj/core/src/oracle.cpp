#include "leakynet/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace leakynet {

namespace {

std::string label(const std::vector<Potential>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(s[i]);
    }
    return out + ")";
}

void enumerate_sorted(std::size_t n, Potential cap, std::vector<Potential>& prefix,
                      std::vector<std::vector<Potential>>& out) {
    if (prefix.size() == n) {
        out.push_back(prefix);
        return;
    }
    const Potential lo = prefix.empty() ? 0 : prefix.back();
    const Potential hi = prefix.empty() ? 0 : cap;
    for (Potential x = lo; x <= hi; ++x) {
        prefix.push_back(x);
        enumerate_sorted(n, cap, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::size_t OracleModel::index_of(std::span<const Potential> u) const {
    std::vector<Potential> key(u.begin(), u.end());
    std::sort(key.begin(), key.end());
    const auto it = lookup_.find(key);
    if (it == lookup_.end()) {
        throw std::out_of_range("oracle: state " + label(key) + " is outside the truncated chain");
    }
    return it->second;
}

std::size_t OracleModel::index_of(const PotentialList& u) const { return index_of(u.values()); }

std::vector<double> OracleModel::row_sums() const {
    std::vector<double> sums(size(), 0.0);
    for (const auto& t : transitions) {
        sums[t.from] += t.rate;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        sums[i] -= exit_rates[i];
    }
    return sums;
}

OracleModel build_oracle(const ModelSpec& spec, int cap) {
    spec.validate();
    if (spec.n < 2 || spec.n > 3) {
        throw std::invalid_argument("oracle: n must be 2 or 3 (state count guard)");
    }
    if (cap < spec.n) {
        throw std::invalid_argument("oracle: cap must be >= n");
    }
    OracleModel model;
    model.spec = spec;
    model.cap = cap;
    std::vector<Potential> prefix;
    enumerate_sorted(static_cast<std::size_t>(spec.n), cap, prefix, model.states);
    for (std::size_t i = 0; i < model.states.size(); ++i) {
        model.lookup_.emplace(model.states[i], i);
    }

    std::map<std::pair<std::size_t, std::size_t>, double> rates;
    for (std::size_t i = 0; i < model.states.size(); ++i) {
        const auto& s = model.states[i];
        for (std::size_t a = 0; a < s.size(); ++a) {
            if (s[a] == 0) {
                continue;
            }
            std::vector<Potential> next = s;
            for (std::size_t b = 0; b < next.size(); ++b) {
                next[b] = b == a ? 0 : std::min<Potential>(next[b] + 1, cap);
            }
            std::sort(next.begin(), next.end());
            const std::size_t j = model.lookup_.at(next);
            const double spike = std::pow(spec.base, static_cast<double>(s[a]));
            if (j != i) {
                rates[{i, j}] += spike;
            }

            next = s;
            next[a] = spec.leak == LeakKind::reset ? 0 : s[a] - 1;
            std::sort(next.begin(), next.end());
            rates[{i, model.lookup_.at(next)}] += 1.0;
        }
    }
    model.exit_rates.assign(model.states.size(), 0.0);
    for (const auto& [key, rate] : rates) {
        model.transitions.push_back({key.first, key.second, rate});
        model.exit_rates[key.first] += rate;
    }
    return model;
}

std::vector<double> mean_absorption(const OracleModel& model) {
    // Embedded jump chain form: m_i - sum_j p_ij m_j = 1 / q_i over transient
    // states; scaling each row by its exit rate keeps the system well
    // conditioned even when rates span many orders of magnitude.
    const std::size_t m = model.size() - 1;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(model.transitions.size() + m);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    for (std::size_t i = 1; i < model.size(); ++i) {
        entries.emplace_back(static_cast<int>(i - 1), static_cast<int>(i - 1), 1.0);
        rhs[static_cast<Eigen::Index>(i - 1)] = 1.0 / model.exit_rates[i];
    }
    for (const auto& t : model.transitions) {
        if (t.from == OracleModel::absorbing || t.to == OracleModel::absorbing) {
            continue;
        }
        entries.emplace_back(static_cast<int>(t.from - 1), static_cast<int>(t.to - 1),
                             -t.rate / model.exit_rates[t.from]);
    }
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
    solver.compute(a);
    if (solver.info() != Eigen::Success) {
        throw std::logic_error("oracle: singular restricted generator");
    }
    Eigen::VectorXd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
        throw std::logic_error("oracle: linear solve failed");
    }
    std::vector<double> out(model.size(), 0.0);
    for (std::size_t i = 1; i < model.size(); ++i) {
        out[i] = x[static_cast<Eigen::Index>(i - 1)];
    }
    return out;
}

double mean_absorption(const OracleModel& model, const PotentialList& u0) {
    return mean_absorption(model)[model.index_of(u0)];
}

namespace {

/// Uniformized chain on the states reachable from one start.
class Uniformized {
public:
    Uniformized(const OracleModel& model, std::size_t start) {
        std::vector<std::vector<std::pair<std::size_t, double>>> rows(model.size());
        for (const auto& t : model.transitions) {
            rows[t.from].emplace_back(t.to, t.rate);
        }
        std::vector<std::size_t> local(model.size(), model.size());
        std::deque<std::size_t> queue{start};
        local[start] = 0;
        order_.push_back(start);
        while (!queue.empty()) {
            const std::size_t i = queue.front();
            queue.pop_front();
            for (const auto& [j, r] : rows[i]) {
                if (local[j] == model.size()) {
                    local[j] = order_.size();
                    order_.push_back(j);
                    queue.push_back(j);
                }
            }
        }
        for (std::size_t i : order_) {
            lambda_ = std::max(lambda_, model.exit_rates[i]);
        }
        if (lambda_ <= 0.0) {
            lambda_ = 1.0;
        }
        const std::size_t k = order_.size();
        stay_.assign(k, 0.0);
        out_.assign(k, {});
        for (std::size_t li = 0; li < k; ++li) {
            const std::size_t i = order_[li];
            stay_[li] = 1.0 - model.exit_rates[i] / lambda_;
            for (const auto& [j, r] : rows[i]) {
                out_[li].emplace_back(local[j], r / lambda_);
            }
            if (i == OracleModel::absorbing) {
                absorbing_local_ = li;
            }
        }
    }

    std::size_t size() const { return order_.size(); }

    /// Distribution after time t starting from p, error at most tol in total
    /// variation.
    std::vector<double> advance(const std::vector<double>& p, double t, double tol = 1e-11) const {
        if (t <= 0.0) {
            return p;
        }
        const double mean = lambda_ * t;
        std::vector<double> cur = p;
        std::vector<double> next(p.size());
        std::vector<double> acc(p.size(), 0.0);
        const double log_mean = std::log(mean);
        double cumulative = 0.0;
        for (std::uint64_t k = 0;; ++k) {
            const double kk = static_cast<double>(k);
            const double w = std::exp(-mean + kk * log_mean - std::lgamma(kk + 1.0));
            if (w > 0.0) {
                for (std::size_t i = 0; i < cur.size(); ++i) {
                    acc[i] += w * cur[i];
                }
                cumulative += w;
            }
            if (kk > mean) {
                const double ratio = mean / (kk + 1.0);
                const double tail = w * ratio / (1.0 - ratio);
                if (tail < tol || 1.0 - cumulative < tol * 1e-3) {
                    break;
                }
            }
            step(cur, next);
            cur.swap(next);
        }
        return acc;
    }

    std::vector<double> point_mass() const {
        std::vector<double> p(size(), 0.0);
        p[0] = 1.0;
        return p;
    }

    double surviving(const std::vector<double>& p) const {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i != absorbing_local_) {
                s += p[i];
            }
        }
        return std::clamp(s, 0.0, 1.0);
    }

    double lambda() const { return lambda_; }

private:
    void step(const std::vector<double>& cur, std::vector<double>& next) const {
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] = stay_[i] * cur[i];
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0.0) {
                continue;
            }
            for (const auto& [j, p] : out_[i]) {
                next[j] += cur[i] * p;
            }
        }
    }

    std::vector<std::size_t> order_;
    std::vector<double> stay_;
    std::vector<std::vector<std::pair<std::size_t, double>>> out_;
    double lambda_ = 0.0;
    std::size_t absorbing_local_ = static_cast<std::size_t>(-1);
};

}  // namespace

std::vector<double> survival(const OracleModel& model, const PotentialList& u0, std::span<const double> times) {
    if (!std::is_sorted(times.begin(), times.end())) {
        throw std::invalid_argument("survival: times must be ascending");
    }
    std::vector<double> out;
    out.reserve(times.size());
    const std::size_t start = model.index_of(u0);
    if (start == OracleModel::absorbing) {
        for (double t : times) {
            out.push_back(t < 0.0 ? 1.0 : 0.0);
        }
        return out;
    }
    const Uniformized chain(model, start);
    std::vector<double> p = chain.point_mass();
    double now = 0.0;
    for (double t : times) {
        if (t < 0.0) {
            throw std::invalid_argument("survival: t must be >= 0");
        }
        p = chain.advance(p, t - now);
        now = t;
        out.push_back(chain.surviving(p));
    }
    return out;
}

double survival(const OracleModel& model, const PotentialList& u0, double t) {
    const std::array<double, 1> times{t};
    return survival(model, u0, times).front();
}

double survival_integral(const OracleModel& model, const PotentialList& u0) {
    const std::size_t start = model.index_of(u0);
    if (start == OracleModel::absorbing) {
        return 0.0;
    }
    // 10-point Gauss-Legendre nodes and weights on [-1, 1].
    static constexpr std::array<double, 5> nodes{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                                 0.8650633666889845, 0.9739065285171717};
    static constexpr std::array<double, 5> weights{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                                   0.1494513491505806, 0.0666713443001536};
    const Uniformized chain(model, start);
    std::vector<double> p = chain.point_mass();
    const double mean_guess = std::max(mean_absorption(model)[start], 1.0 / chain.lambda());
    double a = 0.0;
    double h = 1.0 / chain.lambda();
    double total = 0.0;
    while (chain.surviving(p) > 1e-14) {
        const double mid = a + 0.5 * h;
        double panel = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double x = mid + sign * 0.5 * h * nodes[i];
                panel += weights[i] * chain.surviving(chain.advance(p, x - a, 1e-14));
            }
        }
        total += 0.5 * h * panel;
        p = chain.advance(p, h, 1e-14);
        a += h;
        h = std::min(1.5 * h, 0.25 * mean_guess);
    }
    return total;
}

double survival_quantile(const OracleModel& model, const PotentialList& u0, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("survival_quantile: level must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (survival(model, u0, hi) > level) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (survival(model, u0, mid) > level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double closed_form_n2(const ModelSpec& spec, int k) {
    spec.validate();
    if (k < 1) {
        throw std::invalid_argument("closed_form_n2: k must be >= 1");
    }
    // From (0,1) a spike returns to (1,0) and a leak traps, so E_1 = 1.
    const double e1 = 1.0;
    if (spec.leak == LeakKind::reset) {
        const double b = std::pow(spec.base, static_cast<double>(k));
        return 1.0 / (b + 1.0) + b / (b + 1.0) * e1;
    }
    double prev = e1;
    for (int j = 2; j <= k; ++j) {
        const double b = std::pow(spec.base, static_cast<double>(j));
        prev = (1.0 + b * e1 + prev) / (b + 1.0);
    }
    return prev;
}

OracleReport oracle_report(const ModelSpec& spec, int cap) {
    const OracleModel model = build_oracle(spec, cap);
    const OracleModel doubled = build_oracle(spec, 2 * cap);
    const std::vector<double> means = mean_absorption(model);
    const std::vector<double> means2 = mean_absorption(doubled);

    OracleReport report;
    report.spec = spec;
    report.cap = cap;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto& s = model.states[i];
        report.means.emplace_back(label(s), means[i]);
        if (i == OracleModel::absorbing || s.back() > cap / 2) {
            continue;
        }
        const double other = means2[doubled.index_of(s)];
        report.cap_relative_change = std::max(report.cap_relative_change, std::abs(other - means[i]) / means[i]);
    }
    report.cap_converged = report.cap_relative_change < 1e-8;
    if (spec.n == 2) {
        bool agree = true;
        for (int k = 1; k <= std::min(cap, 15); ++k) {
            const double exact = closed_form_n2(spec, k);
            const double solved = means[model.index_of(PotentialList{0, k})];
            agree = agree && std::abs(exact - solved) <= 1e-10 * exact;
        }
        report.closed_form_agree = agree;
    }
    return report;
}

}  // namespace leakynet
