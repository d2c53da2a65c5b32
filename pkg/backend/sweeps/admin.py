from django.contrib import admin

from .models import SweepFinding, SweepRun


class SweepFindingInline(admin.TabularInline):
    model = SweepFinding
    extra = 0


class SweepRunAdmin(admin.ModelAdmin):
    list_display = ("m", "mode", "oracle", "seed", "count", "sufficiency_violations", "finished_at")
    list_filter = ("m", "mode", "oracle")
    inlines = [SweepFindingInline]


class SweepFindingAdmin(admin.ModelAdmin):
    list_display = ("run", "index", "kind", "branch")
    list_filter = ("kind", "branch")


admin.site.register(SweepRun, SweepRunAdmin)
admin.site.register(SweepFinding, SweepFindingAdmin)
