#ifndef RATLOG_VERDICT_HPP
#define RATLOG_VERDICT_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <variant>

namespace ratlog {

// Search gave up: which limit was hit and how much was spent.
struct Unknown {
  std::string exhausted;  // "tuples", "depth", "steps", ...
  std::size_t spent = 0;
};

// Three-valued outcome. Yes/No carry their own witness types.
template <class YesWitness, class NoWitness>
class Verdict {
public:
  static Verdict yes(YesWitness w) { return Verdict(std::in_place_index<0>, std::move(w)); }
  static Verdict no(NoWitness w) { return Verdict(std::in_place_index<1>, std::move(w)); }
  static Verdict unknown(Unknown u) { return Verdict(std::in_place_index<2>, std::move(u)); }

  bool is_yes() const { return v_.index() == 0; }
  bool is_no() const { return v_.index() == 1; }
  bool is_unknown() const { return v_.index() == 2; }

  const YesWitness& yes_witness() const { return std::get<0>(v_); }
  const NoWitness& no_witness() const { return std::get<1>(v_); }
  const Unknown& unknown_info() const { return std::get<2>(v_); }

private:
  template <std::size_t I, class T>
  Verdict(std::in_place_index_t<I> tag, T&& x) : v_(tag, std::forward<T>(x)) {}

  std::variant<YesWitness, NoWitness, Unknown> v_;
};

}  // namespace ratlog

#endif  // RATLOG_VERDICT_HPP
