#pragma once

namespace blgp {

/// Frequency band [a, b] with 0 <= a < b. a = 0 is the low-pass case.
class Band {
 public:
  Band(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double xi0() const noexcept { return 0.5 * (a_ + b_); }
  double delta() const noexcept { return b_ - a_; }

  bool contains(double xi) const noexcept { return xi >= a_ && xi <= b_; }

  friend bool operator==(const Band&, const Band&) = default;

 private:
  double a_;
  double b_;
};

}  // namespace blgp
