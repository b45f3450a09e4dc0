#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace msle {

// Planar pair partition of {1..2N}; links sorted by a with a < b.
class LinkPattern {
public:
    LinkPattern() = default;
    explicit LinkPattern(std::vector<std::pair<int, int>> links);

    int n() const { return static_cast<int>(links_.size()); }
    const std::vector<std::pair<int, int>>& links() const { return links_; }
    int partner(int i) const { return partner_[i]; }
    bool has_link(int i, int j) const;
    // index (0-based) of the link containing point i
    int link_of(int i) const;

    std::string str() const;  // "1-2.3-4"
    static LinkPattern parse(const std::string& s);

    bool operator==(const LinkPattern& o) const { return links_ == o.links_; }
    bool operator!=(const LinkPattern& o) const { return !(*this == o); }
    bool operator<(const LinkPattern& o) const;

private:
    std::vector<std::pair<int, int>> links_;
    std::vector<int> partner_;  // 1-based, partner_[0] unused
};

LinkPattern parallel_pattern(int n);  // {1,2},{3,4},...
LinkPattern rainbow_pattern(int n);   // {1,2N},{2,2N-1},...

std::vector<LinkPattern> enumerate_patterns(int n);
long catalan(int n);
int pattern_index(const std::vector<LinkPattern>& list, const LinkPattern& p);

int meander_loops(const LinkPattern& alpha, const LinkPattern& beta);
Eigen::MatrixXd meander_matrix(int n, double nu, bool renormalized = false);
double meander_det_reference(int n, double nu);
double chebyshev_u(int n, double x);
bool kappa_invertibility(int n, double kappa);

LinkPattern remove_link(const LinkPattern& alpha, int j);
LinkPattern tie_links(const LinkPattern& beta, int j);
LinkPattern rotate_pattern(const LinkPattern& beta);
LinkPattern reflect_pattern(const LinkPattern& beta);

Eigen::MatrixXd incidence_matrix(int n);

// Nesting depth of each link: 0 for a link with no links inside it.
std::vector<int> nesting_levels(const LinkPattern& beta);

}  // namespace msle
