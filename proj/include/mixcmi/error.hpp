/*
 * Copyright 2026 The mixcmi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace mixcmi {

/// Malformed user input: non-finite values, bad parameters, empty data.
class input_error : public std::invalid_argument {
public:
    explicit input_error(std::string const & what) : std::invalid_argument(what) {}
};

/// A value could not be placed in any bin of a BinSet.
class labeling_error : public std::runtime_error {
public:
    explicit labeling_error(std::string const & what) : std::runtime_error(what) {}
};

/// A histogram model violates a structural requirement (e.g. zero volume).
class model_error : public std::runtime_error {
public:
    explicit model_error(std::string const & what) : std::runtime_error(what) {}
};

}  // namespace mixcmi
