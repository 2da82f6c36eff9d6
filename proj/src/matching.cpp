#include "survimp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace survimp {

namespace {

struct ScoredDonor {
    double value;
    int index;
    bool operator<(const ScoredDonor& o) const {
        return value < o.value || (value == o.value && index < o.index);
    }
};

double dist2(const double* a, const double* b, int p) {
    double d = 0.0;
    for (int c = 0; c < p; ++c) {
        const double t = a[c] - b[c];
        d += t * t;
    }
    return d;
}

// ---- k-d tree over donor points ------------------------------------------

struct KdNode {
    int split_dim = -1;     // -1 marks a leaf
    double split_value = 0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into the permutation
};

class KdTree {
  public:
    KdTree(std::span<const double> pts, int p) : pts_(pts), p_(p) {
        const int n = static_cast<int>(pts.size()) / p;
        perm_.resize(n);
        std::iota(perm_.begin(), perm_.end(), 0);
        nodes_.reserve(2 * n / kLeafSize + 2);
        root_ = build(0, n);
    }

    /// (best squared distance, donor index); equal distances resolve to the
    /// lowest donor index.
    std::pair<double, int> nearest(const double* q) const {
        double best_d2 = std::numeric_limits<double>::infinity();
        int best = -1;
        search(root_, q, best_d2, best);
        return {best_d2, best};
    }

  private:
    static constexpr int kLeafSize = 16;

    const double* point(int i) const { return pts_.data() + static_cast<std::size_t>(i) * p_; }

    int build(int begin, int end) {
        KdNode node;
        node.begin = begin;
        node.end = end;
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        if (end - begin <= kLeafSize) return id;

        // Split on the dimension with the widest spread.
        int dim = 0;
        double best_spread = -1.0;
        for (int c = 0; c < p_; ++c) {
            double lo = point(perm_[begin])[c], hi = lo;
            for (int i = begin + 1; i < end; ++i) {
                const double v = point(perm_[i])[c];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                dim = c;
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical: keep leaf

        const int mid = begin + (end - begin) / 2;
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid,
                         perm_.begin() + end, [&](int a, int b) {
                             const double va = point(a)[dim], vb = point(b)[dim];
                             return va < vb || (va == vb && a < b);
                         });
        nodes_[id].split_dim = dim;
        nodes_[id].split_value = point(perm_[mid])[dim];
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(int id, const double* q, double& best_d2, int& best) const {
        const KdNode& node = nodes_[id];
        if (node.split_dim < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int idx = perm_[i];
                const double d2 = dist2(point(idx), q, p_);
                if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                    best_d2 = d2;
                    best = idx;
                }
            }
            return;
        }
        const double diff = q[node.split_dim] - node.split_value;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        search(near, q, best_d2, best);
        // <= keeps equal-distance donors on the far side reachable, so the
        // lowest-index tie rule sees every candidate.
        if (diff * diff <= best_d2) search(far, q, best_d2, best);
    }

    std::span<const double> pts_;
    int p_;
    std::vector<int> perm_;
    std::vector<KdNode> nodes_;
    int root_ = 0;
};

}  // namespace

std::vector<int> match_scalar(std::span<const double> donor_scores,
                              std::span<const double> recipient_scores) {
    const int nd = static_cast<int>(donor_scores.size());
    if (nd == 0) throw Error("no respondents to draw donors from");
    std::vector<ScoredDonor> sorted(nd);
    for (int i = 0; i < nd; ++i) sorted[i] = {donor_scores[i], i};
    std::sort(sorted.begin(), sorted.end());

    auto value_less = [](const ScoredDonor& d, double v) { return d.value < v; };
    std::vector<int> out(recipient_scores.size());
    for (std::size_t r = 0; r < recipient_scores.size(); ++r) {
        const double target = recipient_scores[r];
        const auto lo =
            std::lower_bound(sorted.begin(), sorted.end(), target, value_less);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        if (lo != sorted.end()) {
            best = lo->index;  // first element of its equal-value run
            best_d = lo->value - target;
        }
        if (lo != sorted.begin()) {
            const auto left = std::prev(lo);
            const double d = target - left->value;
            if (d < best_d) {
                // lowest index within the equal-value run
                best = std::lower_bound(sorted.begin(), sorted.end(),
                                        left->value, value_less)
                           ->index;
                best_d = d;
            } else if (d == best_d) {
                const int left_best =
                    std::lower_bound(sorted.begin(), sorted.end(), left->value,
                                     value_less)
                        ->index;
                best = std::min(best, left_best);
            }
        }
        out[r] = best;
    }
    return out;
}

std::vector<int> match_scalar_exhaustive(
    std::span<const double> donor_scores,
    std::span<const double> recipient_scores) {
    if (donor_scores.empty()) throw Error("no respondents to draw donors from");
    std::vector<int> out(recipient_scores.size());
    for (std::size_t r = 0; r < recipient_scores.size(); ++r) {
        int best = 0;
        double best_d = std::fabs(donor_scores[0] - recipient_scores[r]);
        for (std::size_t i = 1; i < donor_scores.size(); ++i) {
            const double d = std::fabs(donor_scores[i] - recipient_scores[r]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        out[r] = best;
    }
    return out;
}

std::vector<int> match_vector_exhaustive(std::span<const double> donor_x,
                                         std::span<const double> recipient_x,
                                         int p) {
    if (p < 1 || donor_x.size() % p != 0 || recipient_x.size() % p != 0)
        throw Error("covariate dimension mismatch");
    const int nd = static_cast<int>(donor_x.size()) / p;
    if (nd == 0) throw Error("no respondents to draw donors from");
    const int nr = static_cast<int>(recipient_x.size()) / p;
    std::vector<int> out(nr);
    for (int r = 0; r < nr; ++r) {
        const double* q = recipient_x.data() + static_cast<std::size_t>(r) * p;
        int best = 0;
        double best_d2 = dist2(donor_x.data(), q, p);
        for (int i = 1; i < nd; ++i) {
            const double d2 =
                dist2(donor_x.data() + static_cast<std::size_t>(i) * p, q, p);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        out[r] = best;
    }
    return out;
}

std::vector<int> match_vector(std::span<const double> donor_x,
                              std::span<const double> recipient_x, int p) {
    if (p < 1 || donor_x.size() % p != 0 || recipient_x.size() % p != 0)
        throw Error("covariate dimension mismatch");
    const int nd = static_cast<int>(donor_x.size()) / p;
    if (nd == 0) throw Error("no respondents to draw donors from");
    if (nd <= 32) return match_vector_exhaustive(donor_x, recipient_x, p);

    KdTree tree(donor_x, p);
    const int nr = static_cast<int>(recipient_x.size()) / p;
    std::vector<int> out(nr);
    for (int r = 0; r < nr; ++r)
        out[r] = tree.nearest(recipient_x.data() + static_cast<std::size_t>(r) * p)
                     .second;
    return out;
}

std::vector<double> donor_counts(const SurveySample& sample,
                                 std::span<const int> donor_of) {
    std::vector<double> k(sample.n(), 0.0);
    for (int j = 0; j < sample.n(); ++j) {
        if (sample.delta[j]) continue;
        const int d = donor_of[j];
        if (d < 0 || d >= sample.n() || !sample.delta[d])
            throw Error("inconsistent donor assignment");
        k[d] += sample.pi[d] / sample.pi[j];
    }
    return k;
}

namespace {

DonorAssignment assign_from_match(const SurveySample& sample,
                                  const std::vector<int>& donor_rows,
                                  const std::vector<int>& recipient_rows,
                                  const std::vector<int>& matched) {
    DonorAssignment a;
    a.donor_of.assign(sample.n(), -1);
    for (std::size_t j = 0; j < recipient_rows.size(); ++j)
        a.donor_of[recipient_rows[j]] = donor_rows[matched[j]];
    a.k = donor_counts(sample, a.donor_of);
    return a;
}

}  // namespace

DonorAssignment assign_donors_scalar(const SurveySample& sample,
                                     std::span<const double> scores) {
    if (static_cast<int>(scores.size()) != sample.n())
        throw Error("scores not aligned with sample");
    std::vector<int> donor_rows, recipient_rows;
    std::vector<double> dv, rv;
    for (int i = 0; i < sample.n(); ++i) {
        if (sample.delta[i]) {
            donor_rows.push_back(i);
            dv.push_back(scores[i]);
        } else {
            recipient_rows.push_back(i);
            rv.push_back(scores[i]);
        }
    }
    if (donor_rows.empty()) throw Error("no respondents to draw donors from");
    DonorAssignment a =
        assign_from_match(sample, donor_rows, recipient_rows, match_scalar(dv, rv));
    a.match_values.assign(scores.begin(), scores.end());
    return a;
}

DonorAssignment assign_donors_vector(const SurveySample& sample,
                                     std::span<const int> covariates) {
    const int p = static_cast<int>(covariates.size());
    if (p < 1) throw Error("empty covariate list");
    std::vector<int> donor_rows, recipient_rows;
    std::vector<double> dx, rx;
    for (int i = 0; i < sample.n(); ++i) {
        auto& rows = sample.delta[i] ? donor_rows : recipient_rows;
        auto& buf = sample.delta[i] ? dx : rx;
        rows.push_back(i);
        for (int c : covariates) buf.push_back(sample.x_at(i, c));
    }
    if (donor_rows.empty()) throw Error("no respondents to draw donors from");
    return assign_from_match(sample, donor_rows, recipient_rows,
                             match_vector(dx, rx, p));
}

}  // namespace survimp
