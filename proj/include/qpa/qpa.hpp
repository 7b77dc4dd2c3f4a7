// Copyright 2026 The qpa Authors
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

#ifndef QPA_QPA_HPP
#define QPA_QPA_HPP

#include "qpa/errors.hpp"
#include "qpa/qmat.hpp"
#include "qpa/model.hpp"
#include "qpa/divergence.hpp"
#include "qpa/rng.hpp"
#include "qpa/simulate.hpp"
#include "qpa/exponent.hpp"
#include "qpa/wiretap.hpp"

#endif
