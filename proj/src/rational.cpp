// Copyright 2026 The chainauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainauction/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <string>

namespace chainauction {
namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

__int128 pow10_128(int e) {
  __int128 p = 1;
  for (int i = 0; i < e; ++i) p *= 10;
  return p;
}

std::int64_t parse_int64(const std::string& s, const std::string& context) {
  if (!all_digits(s) && !(s.size() > 1 && (s[0] == '-' || s[0] == '+') &&
                          all_digits(s.substr(1)))) {
    throw ParseError("bad integer '" + s + "' in " + context);
  }
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') {
    throw OverflowError("integer '" + s + "' out of 64-bit range");
  }
  return v;
}

}  // namespace

Rat Rat::parse(const std::string& text) {
  if (text.empty()) throw ParseError("empty number literal");

  // Fraction form "p/q".
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t p = parse_int64(text.substr(0, slash), text);
    std::int64_t q = parse_int64(text.substr(slash + 1), text);
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return make(p, q);
  }

  // Decimal form: [+-] digits [. digits] [eE [+-] digits].
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string int_part, frac_part;
  while (pos < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[pos]))) {
    int_part.push_back(text[pos++]);
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      frac_part.push_back(text[pos++]);
    }
  }
  int exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    std::string exp_digits;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      exp_digits.push_back(text[pos++]);
    }
    if (exp_digits.empty() || exp_digits.size() > 2) {
      throw ParseError("bad exponent in '" + text + "'");
    }
    exponent = std::stoi(exp_digits);
    if (exp_neg) exponent = -exponent;
  }
  if (pos != text.size() || (int_part.empty() && frac_part.empty())) {
    throw ParseError("bad number literal '" + text + "'");
  }
  std::string digits = int_part + frac_part;
  if (digits.size() > 37) {
    throw OverflowError("number literal '" + text + "' has too many digits");
  }
  __int128 mantissa = 0;
  for (char c : digits) mantissa = mantissa * 10 + (c - '0');
  if (negative) mantissa = -mantissa;
  int scale = static_cast<int>(frac_part.size()) - exponent;
  if (scale > 37 || scale < -37) {
    throw OverflowError("exponent in '" + text + "' out of range");
  }
  if (scale >= 0) return make(mantissa, pow10_128(scale));
  return make(mantissa * pow10_128(-scale), 1);
}

std::string Rat::to_string() const {
  // Check whether den divides a power of ten (den = 2^a * 5^b).
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  int decimals = twos > fives ? twos : fives;
  __int128 scaled = static_cast<__int128>(num_) * pow10_128(decimals) / den_;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits;
  if (scaled == 0) digits = "0";
  while (scaled > 0) {
    digits.insert(digits.begin(),
                  static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(digits.size()) <= decimals) {
    digits.insert(digits.begin(), '0');
  }
  std::string out;
  if (neg) out.push_back('-');
  out += digits.substr(0, digits.size() - decimals);
  if (decimals > 0) {
    out.push_back('.');
    out += digits.substr(digits.size() - decimals);
  }
  return out;
}

}  // namespace chainauction
