#pragma once

#include "refless/blaschke.hpp"
#include "refless/error.hpp"
#include "refless/gram.hpp"
#include "refless/herglotz.hpp"
#include "refless/kdv.hpp"
#include "refless/linalg.hpp"
#include "refless/oracle.hpp"
#include "refless/potential.hpp"
#include "refless/record_io.hpp"
#include "refless/spectral_data.hpp"
#include "refless/three_spectra.hpp"
#include "refless/verify.hpp"
#include "refless/weyl.hpp"
