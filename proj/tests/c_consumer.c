/* Builds as C against the public header and runs a zero-filled reconstruction. */
#include <math.h>
#include <stdio.h>

#include "spamri/spamri.h"

int main(void) {
  spamri_image* truth = NULL;
  spamri_coils* coils = NULL;
  spamri_mask* mask = NULL;
  spamri_kspace* y = NULL;
  spamri_image* recon = NULL;
  spamri_mask_spec spec;
  double err = -1.0;
  int rc = 1;

  spamri_mask_spec_default(&spec);
  spec.ratio = 1.0;
  if (spamri_phantom("blocks", 16, 16, &truth) != SPAMRI_OK) goto done;
  if (spamri_coils_make(2, 16, 16, "gaussian-lobes", &coils) != SPAMRI_OK) goto done;
  if (spamri_mask_make(&spec, 16, 16, &mask) != SPAMRI_OK) goto done;
  if (spamri_simulate(truth, coils, mask, 0.0, 1, &y) != SPAMRI_OK) goto done;
  if (spamri_recon_ifft(y, coils, mask, &recon) != SPAMRI_OK) goto done;
  if (spamri_rmse(recon, truth, &err) != SPAMRI_OK) goto done;
  rc = err < 1e-12 ? 0 : 1;

done:
  if (rc != 0) fprintf(stderr, "c consumer failed: %s (rmse %g)\n", spamri_last_error(), err);
  spamri_image_free(recon);
  spamri_kspace_free(y);
  spamri_mask_free(mask);
  spamri_coils_free(coils);
  spamri_image_free(truth);
  return rc;
}
