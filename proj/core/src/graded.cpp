#include "cinfty/graded.hpp"

#include <algorithm>

namespace cinfty {

namespace {
const Rational kZero = 0;
const GradedVector kZeroVec{};
}

GradedBasis::GradedBasis(std::vector<Generator> gens) : gens_(std::move(gens))
{
    for (int i = 0; i < size(); ++i) {
        auto [it, fresh] = index_.emplace(gens_[i].name, i);
        if (!fresh)
            throw ParseError("duplicate generator name '" + gens_[i].name + "'");
    }
}

std::optional<int> GradedBasis::find(const std::string& name) const
{
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int GradedBasis::require(const std::string& name) const
{
    auto i = find(name);
    if (!i)
        throw ParseError("unknown generator '" + name + "'");
    return *i;
}

std::vector<int> GradedBasis::in_degree(int d) const
{
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (gens_[i].degree == d)
            out.push_back(i);
    return out;
}

int GradedBasis::max_degree() const
{
    int m = 0;
    for (const auto& g : gens_)
        m = std::max(m, g.degree);
    return m;
}

int GradedBasis::min_degree() const
{
    if (gens_.empty())
        return 0;
    int m = gens_[0].degree;
    for (const auto& g : gens_)
        m = std::min(m, g.degree);
    return m;
}

GradedBasis desuspend(const GradedBasis& b)
{
    std::vector<GradedBasis::Generator> gens = b.generators();
    for (auto& g : gens)
        --g.degree;
    return GradedBasis(std::move(gens));
}

GradedBasis suspend(const GradedBasis& b)
{
    std::vector<GradedBasis::Generator> gens = b.generators();
    for (auto& g : gens)
        ++g.degree;
    return GradedBasis(std::move(gens));
}

int koszul_sign(const std::vector<int>& left, const std::vector<int>& right)
{
    long l = 0, r = 0;
    for (int d : left)
        l += d;
    for (int d : right)
        r += d;
    return ((l % 2) && (r % 2)) ? -1 : 1;
}

const Rational& GradedVector::coeff(int i) const
{
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? kZero : it->second;
}

void GradedVector::set(int i, const Rational& v)
{
    if (v == 0)
        coeffs_.erase(i);
    else
        coeffs_[i] = v;
}

void GradedVector::add(int i, const Rational& v)
{
    auto it = coeffs_.find(i);
    if (it == coeffs_.end()) {
        if (v != 0)
            coeffs_.emplace(i, v);
    } else {
        it->second += v;
        if (it->second == 0)
            coeffs_.erase(it);
    }
}

void GradedVector::add(const GradedVector& other, const Rational& scale)
{
    for (const auto& [i, v] : other.coeffs_)
        add(i, v * scale);
}

GradedVector GradedVector::scaled(const Rational& s) const
{
    GradedVector out;
    if (s == 0)
        return out;
    for (const auto& [i, v] : coeffs_)
        out.coeffs_.emplace(i, v * s);
    return out;
}

std::optional<int> GradedVector::homogeneous_degree(const GradedBasis& basis) const
{
    std::optional<int> deg;
    for (const auto& [i, v] : coeffs_) {
        int d = basis.degree(i);
        if (deg && *deg != d)
            return std::nullopt;
        deg = d;
    }
    return deg;
}

std::string GradedVector::str(const GradedBasis& basis) const
{
    if (coeffs_.empty())
        return "0";
    std::string out;
    for (const auto& [i, v] : coeffs_) {
        if (!out.empty())
            out += " + ";
        out += rational_str(v) + "*" + basis.name(i);
    }
    return out;
}

GradedMap::GradedMap(GradedBasis source, GradedBasis target, int degree,
                     std::map<int, GradedVector> images)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree),
      images_(std::move(images))
{
    for (auto it = images_.begin(); it != images_.end();) {
        if (it->second.is_zero()) {
            it = images_.erase(it);
        } else {
            check_image(it->first, it->second);
            ++it;
        }
    }
}

GradedMap GradedMap::zero(GradedBasis source, GradedBasis target, int degree)
{
    return GradedMap(std::move(source), std::move(target), degree, {});
}

GradedMap GradedMap::identity(const GradedBasis& b)
{
    std::map<int, GradedVector> images;
    for (int i = 0; i < b.size(); ++i) {
        GradedVector v;
        v.set(i, 1);
        images.emplace(i, std::move(v));
    }
    return GradedMap(b, b, 0, std::move(images));
}

void GradedMap::check_image(int i, const GradedVector& v) const
{
    auto deg = v.homogeneous_degree(target_);
    if (deg && *deg != source_.degree(i) + degree_)
        throw AxiomError("image of '" + source_.name(i) + "' is not homogeneous of degree " +
                         std::to_string(source_.degree(i) + degree_));
    if (!deg && !v.is_zero())
        throw AxiomError("image of '" + source_.name(i) + "' is not homogeneous");
}

const GradedVector& GradedMap::image(int i) const
{
    auto it = images_.find(i);
    return it == images_.end() ? kZeroVec : it->second;
}

void GradedMap::set_image(int i, GradedVector v)
{
    if (v.is_zero()) {
        images_.erase(i);
        return;
    }
    check_image(i, v);
    images_[i] = std::move(v);
}

GradedVector GradedMap::apply(const GradedVector& v) const
{
    GradedVector out;
    for (const auto& [i, c] : v.terms())
        out.add(image(i), c);
    return out;
}

bool GradedMap::is_zero() const
{
    return images_.empty();
}

}  // namespace cinfty
