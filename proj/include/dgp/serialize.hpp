/*
 * Copyright 2026 The dgp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGP_SERIALIZE_HPP
#define DGP_SERIALIZE_HPP

#include <string>

#include "dgp/gp.hpp"
#include "dgp/svdgp.hpp"

namespace dgp {

/// JSON model files. Numeric fields round-trip exactly; the loaded model
/// refactorizes at the recorded jitter, so its predictions match the
/// original fit bit for bit.
void save_model(const ScalarGPModel& model, const std::string& path);
void save_model(const SvdGPModel& model, const std::string& path);

/// Peeks at the "kind" field of a model file.
std::string model_kind(const std::string& path);

ScalarGPModel load_scalar_model(const std::string& path);
SvdGPModel load_svdgp_model(const std::string& path);

} // namespace dgp

#endif // DGP_SERIALIZE_HPP
