#include "msle/linkpat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace msle {

namespace {

std::vector<std::pair<int, int>> canonical(std::vector<std::pair<int, int>> links) {
    for (auto& l : links)
        if (l.first > l.second) std::swap(l.first, l.second);
    std::sort(links.begin(), links.end());
    return links;
}

bool crosses(const std::pair<int, int>& p, const std::pair<int, int>& q) {
    auto [a, b] = p;
    auto [c, d] = q;
    return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

void gen(std::vector<int>& open, int pos, int n2, std::vector<std::pair<int, int>>& cur,
         std::vector<std::vector<std::pair<int, int>>>& out) {
    if (pos > n2) {
        if (open.empty()) out.push_back(cur);
        return;
    }
    int remaining = n2 - pos + 1;
    if (static_cast<int>(open.size()) < remaining) {
        open.push_back(pos);
        gen(open, pos + 1, n2, cur, out);
        open.pop_back();
    }
    if (!open.empty()) {
        int a = open.back();
        open.pop_back();
        cur.emplace_back(a, pos);
        gen(open, pos + 1, n2, cur, out);
        cur.pop_back();
        open.push_back(a);
    }
}

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

LinkPattern::LinkPattern(std::vector<std::pair<int, int>> links) : links_(canonical(std::move(links))) {
    int n2 = 2 * n();
    partner_.assign(n2 + 1, 0);
    for (auto [a, b] : links_) {
        if (a < 1 || b > n2 || a == b) throw std::invalid_argument("link pattern: index out of range");
        if (partner_[a] || partner_[b]) throw std::invalid_argument("link pattern: repeated index");
        partner_[a] = b;
        partner_[b] = a;
    }
    for (std::size_t i = 0; i < links_.size(); ++i)
        for (std::size_t j = i + 1; j < links_.size(); ++j)
            if (crosses(links_[i], links_[j])) throw std::invalid_argument("link pattern: crossing links");
}

bool LinkPattern::has_link(int i, int j) const {
    if (i < 1 || i > 2 * n() || j < 1 || j > 2 * n()) return false;
    return partner_[i] == j;
}

int LinkPattern::link_of(int i) const {
    for (int r = 0; r < n(); ++r)
        if (links_[r].first == i || links_[r].second == i) return r;
    throw std::invalid_argument("link_of: index not present");
}

bool LinkPattern::operator<(const LinkPattern& o) const {
    std::vector<int> k1, k2;
    for (auto& l : links_) k1.push_back(l.first);
    for (auto& l : links_) k1.push_back(l.second);
    for (auto& l : o.links_) k2.push_back(l.first);
    for (auto& l : o.links_) k2.push_back(l.second);
    return k1 < k2;
}

std::string LinkPattern::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < links_.size(); ++i) {
        if (i) os << '.';
        os << links_[i].first << '-' << links_[i].second;
    }
    return os.str();
}

LinkPattern LinkPattern::parse(const std::string& s) {
    std::vector<std::pair<int, int>> links;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '.')) {
        auto dash = item.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("pattern string: missing '-' in " + item);
        std::size_t p1 = 0, p2 = 0;
        int a = std::stoi(item.substr(0, dash), &p1);
        int b = std::stoi(item.substr(dash + 1), &p2);
        if (p1 != dash || p2 != item.size() - dash - 1)
            throw std::invalid_argument("pattern string: malformed link " + item);
        links.emplace_back(a, b);
    }
    if (links.empty()) throw std::invalid_argument("pattern string: empty");
    return LinkPattern(links);
}

LinkPattern parallel_pattern(int n) {
    std::vector<std::pair<int, int>> l;
    for (int i = 0; i < n; ++i) l.emplace_back(2 * i + 1, 2 * i + 2);
    return LinkPattern(l);
}

LinkPattern rainbow_pattern(int n) {
    std::vector<std::pair<int, int>> l;
    for (int i = 1; i <= n; ++i) l.emplace_back(i, 2 * n + 1 - i);
    return LinkPattern(l);
}

long catalan(int n) { return binom(2 * n, n) / (n + 1); }

std::vector<LinkPattern> enumerate_patterns(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("enumerate_patterns: N out of range [1,8]");
    std::vector<std::vector<std::pair<int, int>>> raw;
    std::vector<int> open;
    std::vector<std::pair<int, int>> cur;
    gen(open, 1, 2 * n, cur, raw);
    std::vector<LinkPattern> out;
    out.reserve(raw.size());
    for (auto& r : raw) out.emplace_back(r);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int pattern_index(const std::vector<LinkPattern>& list, const LinkPattern& p) {
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == p) return static_cast<int>(i);
    return -1;
}

int meander_loops(const LinkPattern& alpha, const LinkPattern& beta) {
    if (alpha.n() != beta.n()) throw std::invalid_argument("meander_loops: mismatched N");
    int n2 = 2 * alpha.n();
    std::vector<char> seen(n2 + 1, 0);
    int loops = 0;
    for (int start = 1; start <= n2; ++start) {
        if (seen[start]) continue;
        ++loops;
        int i = start;
        do {
            seen[i] = 1;
            int j = alpha.partner(i);
            seen[j] = 1;
            i = beta.partner(j);
        } while (i != start);
    }
    return loops;
}

Eigen::MatrixXd meander_matrix(int n, double nu, bool renormalized) {
    auto pats = enumerate_patterns(n);
    int m = static_cast<int>(pats.size());
    Eigen::MatrixXd mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            int l = meander_loops(pats[i], pats[j]);
            mat(i, j) = renormalized ? (l == 1 ? 1.0 : 0.0) : std::pow(nu, l);
        }
    return mat;
}

double chebyshev_u(int n, double x) {
    if (n == 0) return 1.0;
    double u0 = 1.0, u1 = x;
    for (int k = 1; k < n; ++k) {
        double u2 = x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

double meander_det_reference(int n, double nu) {
    if (n < 1 || n > 8) throw std::invalid_argument("meander_det_reference: N out of range");
    double det = 1.0;
    for (int k = 1; k <= n; ++k) {
        long a = binom(2 * n, n - k) - 2 * binom(2 * n, n - k - 1) + binom(2 * n, n - k - 2);
        det *= std::pow(chebyshev_u(k, nu), static_cast<double>(a));
    }
    return det;
}

bool kappa_invertibility(int n, double kappa) {
    if (!(kappa > 0 && kappa < 8)) throw std::invalid_argument("kappa_invertibility: kappa outside (0,8)");
    for (int p = 2; p <= n + 1; ++p) {
        double pp = 4.0 * p / kappa;
        double r = std::round(pp);
        if (r >= 1 && std::abs(pp - r) < 1e-9 * r && std::gcd(p, static_cast<int>(r)) == 1) return false;
    }
    return true;
}

LinkPattern remove_link(const LinkPattern& alpha, int j) {
    if (!alpha.has_link(j, j + 1)) throw std::invalid_argument("remove_link: link {j,j+1} absent");
    std::vector<std::pair<int, int>> out;
    auto shift = [j](int i) { return i > j + 1 ? i - 2 : i; };
    for (auto [a, b] : alpha.links())
        if (a != j) out.emplace_back(shift(a), shift(b));
    return LinkPattern(out);
}

LinkPattern tie_links(const LinkPattern& beta, int j) {
    int n2 = 2 * beta.n();
    if (j < 1 || j > n2) throw std::invalid_argument("tie_links: index out of range");
    int j1 = (j == n2) ? 1 : j + 1;
    if (beta.partner(j) == j1) return beta;
    int k1 = beta.partner(j);
    int k2 = beta.partner(j1);
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : beta.links())
        if (a != j && b != j && a != j1 && b != j1) out.emplace_back(a, b);
    out.emplace_back(j, j1);
    out.emplace_back(k1, k2);
    return LinkPattern(out);
}

LinkPattern rotate_pattern(const LinkPattern& beta) {
    int n2 = 2 * beta.n();
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : beta.links()) out.emplace_back(a % n2 + 1, b % n2 + 1);
    return LinkPattern(out);
}

LinkPattern reflect_pattern(const LinkPattern& beta) {
    int n2 = 2 * beta.n();
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : beta.links()) out.emplace_back(n2 + 1 - b, n2 + 1 - a);
    return LinkPattern(out);
}

Eigen::MatrixXd incidence_matrix(int n) {
    if (n < 1 || n > 6) throw std::invalid_argument("incidence_matrix: N out of range [1,6]");
    auto pats = enumerate_patterns(n);
    int m = static_cast<int>(pats.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const auto& links = pats[i].links();
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<std::pair<int, int>> cand;
            for (int r = 0; r < n; ++r) cand.emplace_back(links[r].first, links[perm[r]].second);
            bool ok = true;
            for (auto [a, b] : cand)
                if (a == b) ok = false;
            for (std::size_t p = 0; ok && p < cand.size(); ++p)
                for (std::size_t q = p + 1; ok && q < cand.size(); ++q) {
                    auto c1 = cand[p], c2 = cand[q];
                    if (c1.first > c1.second) std::swap(c1.first, c1.second);
                    if (c2.first > c2.second) std::swap(c2.first, c2.second);
                    if (crosses(c1, c2)) ok = false;
                }
            if (!ok) continue;
            int j = pattern_index(pats, LinkPattern(cand));
            k(i, j) = 1.0;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return k;
}

std::vector<int> nesting_levels(const LinkPattern& beta) {
    const auto& l = beta.links();
    int n = beta.n();
    std::vector<int> lev(n, -1);
    // links sorted by a; inner links have larger a and smaller b
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int p, int q) { return l[p].second - l[p].first < l[q].second - l[q].first; });
    for (int r : order) {
        int best = 0;
        for (int s = 0; s < n; ++s)
            if (s != r && l[s].first > l[r].first && l[s].second < l[r].second) best = std::max(best, lev[s] + 1);
        lev[r] = best;
    }
    return lev;
}

}  // namespace msle
