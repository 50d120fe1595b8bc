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

#ifndef CHAINAUCTION_ERRORS_HPP_
#define CHAINAUCTION_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace chainauction {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text (JSON documents, number literals, CSV configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its documented domain (rule parameters, config
// fields, division by zero, malformed rule strings).
class BadParameter : public Error {
 public:
  using Error::Error;
};

// Pointwise curve algebra applied to curves of different lengths.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// A market with no bids; every market must contain at least one bid.
class EmptyMarket : public Error {
 public:
  using Error::Error;
};

// Exact rational arithmetic left the 64-bit numerator/denominator range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A discriminating rule was handed to a component that requires uniform
// (non-discriminating) prices, e.g. the pivot protocols.
class RuleNotND : public Error {
 public:
  using Error::Error;
};

// A rule whose payments are not deterministic functions of the bids was
// handed to the critical-value prober.
class RuleNotProbeFriendly : public Error {
 public:
  using Error::Error;
};

// alpha* search precondition failed: mean revenue does not change sign
// between the two endpoint rules.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

// The win predicate observed during a critical-value probe is not
// monotone in the probed agent's bid.
class NotMonotonic : public Error {
 public:
  using Error::Error;
};

}  // namespace chainauction

#endif  // CHAINAUCTION_ERRORS_HPP_
