#ifndef SURVIMP_MATCHING_HPP
#define SURVIMP_MATCHING_HPP

#include <span>
#include <vector>

#include "survimp/design.hpp"

namespace survimp {

/// Donor bookkeeping for one imputation run. donor_of[j] is the sample row
/// of the donor serving nonrespondent row j (-1 on respondent rows); k[i] is
/// the design-weighted donor count
///   k_i = sum_j (pi_i / pi_j) (1 - delta_j) d_ij
/// on respondent rows and 0 elsewhere.
struct DonorAssignment {
    std::vector<int> donor_of;
    std::vector<double> k;
    std::vector<double> match_values;  // scalar scores used, empty for x-matching
};

/// Index of the nearest donor for each recipient by absolute difference;
/// equidistant donors resolve to the lowest donor index. Sorted donors plus
/// a binary search per recipient, O((n_R + n_M) log n_R).
std::vector<int> match_scalar(std::span<const double> donor_scores,
                              std::span<const double> recipient_scores);

/// Euclidean nearest donor per recipient, same tie rule. Uses a k-d tree
/// above a small size cutoff; agrees exactly with the exhaustive scan.
std::vector<int> match_vector(std::span<const double> donor_x,
                              std::span<const double> recipient_x, int p);

/// Reference exhaustive argmin scans.
std::vector<int> match_scalar_exhaustive(std::span<const double> donor_scores,
                                         std::span<const double> recipient_scores);
std::vector<int> match_vector_exhaustive(std::span<const double> donor_x,
                                         std::span<const double> recipient_x,
                                         int p);

/// Matches nonrespondents on the given per-row scores.
DonorAssignment assign_donors_scalar(const SurveySample& sample,
                                     std::span<const double> scores);

/// Matches nonrespondents on the covariates listed in `covariates`.
DonorAssignment assign_donors_vector(const SurveySample& sample,
                                     std::span<const int> covariates);

/// Donor counts per Eq-style weighting from a donor map.
std::vector<double> donor_counts(const SurveySample& sample,
                                 std::span<const int> donor_of);

}  // namespace survimp

#endif
