#ifndef MCCHAN_MCCHAN_HPP
#define MCCHAN_MCCHAN_HPP

#include "boundary.hpp"
#include "diffusion_tf.hpp"
#include "errors.hpp"
#include "fdtd.hpp"
#include "io.hpp"
#include "response.hpp"

#endif
