/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include "okc/benchmark.hpp"
#include "okc/errors.hpp"
#include "okc/evaluation.hpp"
#include "okc/incremental_gram.hpp"
#include "okc/kernel.hpp"
#include "okc/model_io.hpp"
#include "okc/model_selection.hpp"
#include "okc/ocelm.hpp"
#include "okc/parallel.hpp"
#include "okc/stream_data.hpp"
