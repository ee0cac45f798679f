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
#ifndef Y2S_REAL_HPP_
#define Y2S_REAL_HPP_

// The numeric core is compiled twice: once with 32-bit floats (the default,
// used for training) and once with 64-bit floats for tight gradient checks.
// Each build lives in its own inline namespace so both can be linked into
// one binary.

#if defined(Y2S_REAL_DOUBLE)
#define Y2S_REAL_NS f64
#else
#define Y2S_REAL_NS f32
#endif

#define Y2S_NAMESPACE_BEGIN \
  namespace y2s {           \
  inline namespace Y2S_REAL_NS {
#define Y2S_NAMESPACE_END \
  }                       \
  }

Y2S_NAMESPACE_BEGIN
#if defined(Y2S_REAL_DOUBLE)
using Real = double;
#else
using Real = float;
#endif
Y2S_NAMESPACE_END

#endif  // Y2S_REAL_HPP_
