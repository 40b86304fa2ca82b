#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qfun {

using Var = std::uint32_t;

/// Partial mapping from variables to {0,1}. The domain is explicit; get()
/// outside of it throws.
class Assignment {
public:
    Assignment() = default;
    Assignment(std::initializer_list<std::pair<const Var, bool>> init) : values_(init) {}

    void set(Var v, bool value) { values_[v] = value; }
    void erase(Var v) { values_.erase(v); }

    bool contains(Var v) const { return values_.count(v) != 0; }
    bool get(Var v) const;
    std::optional<bool> find(Var v) const;

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::vector<Var> domain() const;

    /// True iff every variable of `vars` has a value.
    bool covers(std::span<const Var> vars) const;

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment&, const Assignment&) = default;

private:
    std::map<Var, bool> values_;
};

/// Restriction of `tau` to the variables in `vars`.
Assignment restrict(const Assignment& tau, std::span<const Var> vars);

} // namespace qfun
