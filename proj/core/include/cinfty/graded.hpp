#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cinfty/rational.hpp"

namespace cinfty {

// Finite ordered basis of a graded Q-vector space. Names are unique; the
// generator order is the canonical order used by every serialization.
class GradedBasis {
public:
    struct Generator {
        std::string name;
        int degree = 0;
        bool operator==(const Generator&) const = default;
    };

    GradedBasis() = default;
    explicit GradedBasis(std::vector<Generator> gens);

    int size() const { return static_cast<int>(gens_.size()); }
    int degree(int i) const { return gens_[i].degree; }
    const std::string& name(int i) const { return gens_[i].name; }
    const std::vector<Generator>& generators() const { return gens_; }

    std::optional<int> find(const std::string& name) const;
    int require(const std::string& name) const;  // throws ParseError when absent
    std::vector<int> in_degree(int d) const;
    int max_degree() const;
    int min_degree() const;

    bool operator==(const GradedBasis&) const = default;

private:
    std::vector<Generator> gens_;
    std::map<std::string, int> index_;
};

// Same names, every degree lowered by one.
GradedBasis desuspend(const GradedBasis& b);
GradedBasis suspend(const GradedBasis& b);

// Sign of moving a block of homogeneous elements with degrees `left` past a
// block with degrees `right`: (-1)^(sum(left) * sum(right)). This is the only
// sign primitive in the library; every other sign is assembled from it.
int koszul_sign(const std::vector<int>& left, const std::vector<int>& right);

// Sparse vector over a GradedBasis (generator index -> coefficient).
class GradedVector {
public:
    GradedVector() = default;

    const Rational& coeff(int i) const;
    void set(int i, const Rational& v);
    void add(int i, const Rational& v);
    void add(const GradedVector& other, const Rational& scale = 1);
    GradedVector scaled(const Rational& s) const;

    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, Rational>& terms() const { return coeffs_; }

    // Degree when all nonzero terms agree; nullopt for 0 or mixed vectors.
    std::optional<int> homogeneous_degree(const GradedBasis& basis) const;
    std::string str(const GradedBasis& basis) const;

    bool operator==(const GradedVector&) const = default;

private:
    std::map<int, Rational> coeffs_;
};

// Degree-homogeneous linear map between graded bases, given on generators.
// Construction checks that the image of a degree-k generator is homogeneous
// of degree k + map degree.
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(GradedBasis source, GradedBasis target, int degree,
              std::map<int, GradedVector> images);

    static GradedMap zero(GradedBasis source, GradedBasis target, int degree);
    static GradedMap identity(const GradedBasis& b);

    const GradedBasis& source() const { return source_; }
    const GradedBasis& target() const { return target_; }
    int degree() const { return degree_; }

    const GradedVector& image(int i) const;
    void set_image(int i, GradedVector v);  // rechecks homogeneity
    GradedVector apply(const GradedVector& v) const;
    bool is_zero() const;

private:
    void check_image(int i, const GradedVector& v) const;

    GradedBasis source_, target_;
    int degree_ = 0;
    std::map<int, GradedVector> images_;
};

}  // namespace cinfty
