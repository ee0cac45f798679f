/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef Y2S_CAPI_COMMANDS_HPP_
#define Y2S_CAPI_COMMANDS_HPP_

#include <functional>
#include <string>

#include "y2s/runconfig.hpp"

namespace y2s::commands {

using Output = std::function<void(const std::string&)>;

void gen_data(const RunConfig& cfg, const Output& out);
void import(const RunConfig& cfg, const Output& out);
void train(const RunConfig& cfg, const Output& out);
void eval(const RunConfig& cfg, const Output& out);
void caption(const RunConfig& cfg, const Output& out);
void grad_check(const RunConfig& cfg, const Output& out);

}  // namespace y2s::commands

#endif  // Y2S_CAPI_COMMANDS_HPP_
