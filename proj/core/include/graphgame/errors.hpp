// Copyright 2026 The graphgame Authors
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

#ifndef GRAPHGAME_ERRORS_HPP
#define GRAPHGAME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphgame {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (shapes, labels, ranges).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public InvalidInput {
 public:
  explicit UnknownNode(const std::string& label)
      : InvalidInput("unknown node '" + label + "'") {}
};

class NotConnected : public Error {
 public:
  using Error::Error;
};

class NonPositiveTarget : public Error {
 public:
  using Error::Error;
};

// Smoothing requested at a level k where no state has mass below 1/k.
class EmptyLowSet : public Error {
 public:
  using Error::Error;
};

// The support of a target splits across connected components of the graph:
// no process consistent with the graph can reach the target.
class SupportSplit : public Error {
 public:
  using Error::Error;
};

class NotDecomposable : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// A process attempted a move between non-adjacent states.
class ConsistencyViolation : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphgame

#endif  // GRAPHGAME_ERRORS_HPP
